#include "phaserep/pipeline.hpp"

#include "phaserep/common.hpp"
#include "phaserep/unwrap.hpp"
#include "phaserep/wiener.hpp"

namespace phaserep {
namespace {

std::vector<double> fit_length(std::vector<double> x, std::size_t len) {
  x.resize(len, 0.0);
  return x;
}

void check_references(const SeparationInput& in) {
  require(!in.references.empty(), "separation needs at least one reference source");
  for (const auto& r : in.references)
    require(r.size() == in.mixture.size(), "reference length must match the mixture");
}

}  // namespace

SeparationOutput separate_mask(const SeparationInput& in, double exponent) {
  check_references(in);
  const Spectrogram mix = stft(in.mixture, in.cfg);
  std::vector<Mat<double>> mags;
  mags.reserve(in.references.size());
  for (const auto& r : in.references) mags.push_back(magnitudes(stft(r, in.cfg)));

  const std::vector<Spectrogram> parts = mask_split(mix, mags, exponent);
  SeparationOutput out;
  for (const Spectrogram& part : parts)
    out.estimates.push_back(fit_length(istft(part), in.mixture.size()));
  out.scores = bss_scores_all(out.estimates, in.references);
  return out;
}

SeparationOutput separate_unwrap(const SeparationInput& in, const EstimationConfig& cfg,
                                 EstimationMode mode) {
  check_references(in);
  const Spectrogram mix = stft(in.mixture, in.cfg);
  std::vector<Mat<double>> mags;
  mags.reserve(in.references.size());
  for (const auto& r : in.references) mags.push_back(magnitudes(stft(r, in.cfg)));

  std::vector<std::size_t> frames = in.onset_frames;
  if (frames.empty()) frames = detect_onsets(mix, in.onset_cfg);
  require(!frames.empty(), "no onsets found in the mixture");

  const OnsetMatrix y = extract_onset_matrix(mix, frames);
  std::vector<Mat<double>> onset_mags;
  onset_mags.reserve(mags.size());
  for (const auto& m : mags) onset_mags.push_back(gather_columns(m, frames));

  const PhaseParams init = default_init(y, std::move(onset_mags));
  EstimationResult res = mode == EstimationMode::strict ? run_strict(y, init, cfg)
                                                        : run_relaxed(y, init, cfg);

  SeparationOutput out;
  out.cost_trace = std::move(res.cost_trace);
  out.onset_frames = frames;
  const std::size_t F = y.rows(), M = y.cols();
  for (std::size_t k = 0; k < in.references.size(); ++k) {
    Mat<double> onset_phase = res.params.onset_phase[k];
    if (mode == EstimationMode::strict) {
      // Strict sweeps never touch the stored onset phases; compose them.
      for (std::size_t m = 0; m < M; ++m)
        for (std::size_t f = 0; f < F; ++f)
          onset_phase(f, m) = wrap_phase(res.params.ref_phase[k][f] +
                                         res.params.delay[k][m] * static_cast<double>(f));
    }
    const Spectrogram part = unwrap_source(mags[k], onset_phase, frames, in.cfg);
    out.estimates.push_back(fit_length(istft(part), in.mixture.size()));
  }
  out.scores = bss_scores_all(out.estimates, in.references);
  return out;
}

OnsetExperiment onset_experiment(const Scene& scene) {
  OnsetExperiment ex;
  ex.onset_frames = scene.onset_frames;
  const Spectrogram mix = stft(scene.mixture, scene.cfg);
  ex.y = extract_onset_matrix(mix, ex.onset_frames);
  for (const auto& src : scene.sources) {
    const Spectrogram s = stft(src, scene.cfg);
    ex.truth.push_back(extract_onset_matrix(s, ex.onset_frames));
    ex.mags.push_back(gather_columns(magnitudes(s), ex.onset_frames));
  }
  return ex;
}

std::vector<OnsetMatrix> mask_onset_estimates(const OnsetExperiment& ex, double exponent) {
  return mask_split(ex.y, ex.mags, exponent);
}

}  // namespace phaserep
