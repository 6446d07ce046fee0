#include "phaserep/synth.hpp"

#include <cmath>
#include <cstdlib>

#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

constexpr double kRingFloor = 1e-6;

// decay per sample for a -60 dB time of t60 seconds
double decay_for_t60(double t60, double rate) { return 3.0 * std::log(10.0) / (t60 * rate); }

DampedSpec spec_from_bins(const std::vector<std::size_t>& bins, double decay,
                          const StftConfig& cfg, Rng& rng) {
  DampedSpec spec;
  spec.partials.reserve(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    Partial p;
    p.freq_hz = static_cast<double>(bins[i]) * cfg.sample_rate / static_cast<double>(cfg.window);
    p.amp = 1.0 / static_cast<double>(i + 1);
    p.phase = rng.angle();
    p.decay = decay;
    spec.partials.push_back(p);
  }
  return spec;
}

std::vector<std::size_t> stack_bins(std::size_t fundamental, std::size_t count) {
  std::vector<std::size_t> bins(count);
  for (std::size_t p = 0; p < count; ++p) bins[p] = fundamental * (p + 1);
  return bins;
}

// Sorted bins in [lo, hi] with every gap at least min_dist: draw the slack of
// each gap, sort, and re-add the mandatory spacing. Harmonic stacks cannot
// hold such a guarantee (their partial grids always interleave), so the
// spectrally disjoint scenes use free bin sets instead.
std::vector<std::size_t> spaced_bins(std::size_t count, std::size_t lo, std::size_t hi,
                                     std::size_t min_dist, Rng& rng) {
  const std::size_t span = (count - 1) * min_dist;
  require(hi > lo && hi - lo >= span, "spaced_bins: range too narrow");
  const std::size_t slack = hi - lo - span;
  std::vector<std::size_t> bins(count);
  for (auto& b : bins) b = rng.below(slack + 1);
  std::sort(bins.begin(), bins.end());
  for (std::size_t i = 0; i < count; ++i) bins[i] += lo + i * min_dist;
  return bins;
}

// Deal `per_source` of the spaced bins to each source at random.
std::vector<std::vector<std::size_t>> deal_bins(const std::vector<std::size_t>& bins,
                                                std::size_t num_sources,
                                                std::size_t per_source, Rng& rng) {
  std::vector<std::size_t> owner(bins.size());
  for (std::size_t i = 0; i < owner.size(); ++i) owner[i] = i / per_source;
  for (std::size_t i = owner.size(); i > 1; --i)
    std::swap(owner[i - 1], owner[rng.below(i)]);
  std::vector<std::vector<std::size_t>> out(num_sources);
  for (std::size_t i = 0; i < bins.size(); ++i) out[owner[i]].push_back(bins[i]);
  return out;
}

struct SceneLayout {
  double seconds = 1.5;
  std::vector<std::size_t> onset_frames;
  std::vector<std::vector<std::size_t>> active;  // sources struck at each onset
};

SceneLayout layout_for(SceneKind kind) {
  SceneLayout l;
  if (kind == SceneKind::three_source) {
    l.seconds = 1.8;
    l.onset_frames = {6, 23, 40, 57, 74, 91, 108};
    l.active = {{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}, {0, 1, 2}};
  } else {
    l.seconds = 1.5;
    l.onset_frames = {8, 47, 86};
    l.active = {{0}, {1}, {0, 1}};
  }
  return l;
}

}  // namespace

DampedSpec harmonic_spec(std::size_t fundamental_bin, std::size_t count, double decay,
                         const StftConfig& cfg, Rng& rng) {
  require(fundamental_bin > 0 && count > 0, "harmonic_spec: empty stack");
  require(fundamental_bin * count < cfg.bins / 2, "harmonic_spec: stack exceeds half spectrum");
  return spec_from_bins(stack_bins(fundamental_bin, count), decay, cfg, rng);
}

void add_damped(std::vector<double>& dst, const DampedSpec& spec,
                std::size_t onset_sample, double gain, double sample_rate) {
  if (onset_sample >= dst.size()) return;
  const std::size_t room = dst.size() - onset_sample;
  for (const Partial& p : spec.partials) {
    std::size_t ring = room;
    if (p.decay > 0.0) {
      const double span = std::log(1.0 / kRingFloor) / p.decay;
      if (span < static_cast<double>(room)) ring = static_cast<std::size_t>(span) + 1;
    }
    const double w = kTwoPi * p.freq_hz / sample_rate;
    double* out = dst.data() + onset_sample;
    for (std::size_t n = 0; n < ring; ++n) {
      const double age = static_cast<double>(n);
      out[n] += gain * p.amp * std::sin(w * age + p.phase) * std::exp(-p.decay * age);
    }
  }
}

Scene make_scene(SceneKind kind, std::uint64_t seed, const StftConfig& cfg) {
  cfg.validate();
  Rng rng(seed);
  const SceneLayout layout = layout_for(kind);
  const std::size_t num_sources = kind == SceneKind::three_source ? 3 : 2;

  Scene scene;
  scene.cfg = cfg;
  scene.kind = kind;
  scene.onset_frames = layout.onset_frames;

  // Spectra. Overlapped shares source 0's second and third partial bins.
  std::vector<std::vector<std::size_t>> bins(num_sources);
  if (kind == SceneKind::disjoint) {
    bins = deal_bins(spaced_bins(8, 14, 180, 12, rng), 2, 4, rng);
  } else if (kind == SceneKind::overlapped) {
    const std::size_t b1 = 14 + rng.below(13);
    bins[0] = stack_bins(b1, 4);
    bins[1] = {b1, 2 * b1, 3 * b1, 0};
    for (std::size_t j = 3; j < 4; ++j) {
      for (;;) {
        const std::size_t c = 14 + rng.below(97);
        bool clear = true;
        for (std::size_t b : bins[0])
          if (c + 4 > b && b + 4 > c) clear = false;
        for (std::size_t i = 0; i < j; ++i)
          if (c + 4 > bins[1][i] && bins[1][i] + 4 > c) clear = false;
        if (clear) {
          bins[1][j] = c;
          break;
        }
      }
    }
  } else {
    bins = deal_bins(spaced_bins(12, 14, 180, 6, rng), 3, 4, rng);
  }

  for (std::size_t k = 0; k < num_sources; ++k) {
    const double decay = decay_for_t60(rng.uniform(0.4, 0.6), cfg.sample_rate);
    scene.specs.push_back(spec_from_bins(bins[k], decay, cfg, rng));
  }

  const std::size_t len = static_cast<std::size_t>(layout.seconds * cfg.sample_rate);
  require(layout.onset_frames.back() + 1 < cfg.frame_count(len),
          "make_scene: scene too short for its onset grid");
  scene.sources.assign(num_sources, std::vector<double>(len, 0.0));

  for (std::size_t m = 0; m < layout.onset_frames.size(); ++m) {
    for (std::size_t k : layout.active[m]) {
      SceneNote note;
      note.source = k;
      note.onset_index = m;
      // Attacks sit exactly on the frame grid so every occurrence presents the
      // same windowed template at its onset column (sub-frame offsets are
      // exercised by make_two_occurrence instead).
      note.sample = layout.onset_frames[m] * cfg.hop;
      note.gain = rng.uniform(0.5, 1.0);
      add_damped(scene.sources[k], scene.specs[k], note.sample, note.gain, cfg.sample_rate);
      scene.notes.push_back(note);
    }
  }

  scene.mixture.assign(len, 0.0);
  for (const auto& src : scene.sources)
    for (std::size_t i = 0; i < len; ++i) scene.mixture[i] += src[i];
  return scene;
}

ModelBuilt make_model_built(std::size_t sources, std::size_t bins, std::size_t onsets,
                            std::uint64_t seed) {
  require(sources > 0 && bins > 0 && onsets > 0, "make_model_built: empty model");
  Rng rng(seed);
  ModelBuilt out;
  PhaseParams& p = out.truth;
  // Activation protocol: each source gets a solo onset column before every
  // source sounds together. Solo columns anchor each reference phase with
  // data no other source touches; the joint columns carry the bin overlap.
  const std::size_t solos = std::min(sources, onsets - 1);
  for (std::size_t k = 0; k < sources; ++k) {
    Mat<double> mag(bins, onsets);
    for (std::size_t m = 0; m < onsets; ++m) {
      const bool active = m >= solos || m == k;
      for (std::size_t f = 0; f < bins; ++f)
        mag(f, m) = active ? std::fabs(rng.gaussian()) : 0.0;
    }
    std::vector<double> ref(bins);
    for (double& v : ref) v = rng.angle();
    std::vector<double> delay(onsets, 0.0);
    for (std::size_t m = 1; m < onsets; ++m) delay[m] = rng.angle();
    Mat<double> onset_phase(bins, onsets);
    for (std::size_t m = 0; m < onsets; ++m)
      for (std::size_t f = 0; f < bins; ++f)
        onset_phase(f, m) = wrap_phase(ref[f] + delay[m] * static_cast<double>(f));
    p.mag.push_back(std::move(mag));
    p.ref_phase.push_back(std::move(ref));
    p.delay.push_back(std::move(delay));
    p.onset_phase.push_back(std::move(onset_phase));
  }
  out.y = Mat<cplx>(bins, onsets);
  for (std::size_t k = 0; k < sources; ++k) {
    const Mat<cplx> src = strict_source(p.mag[k], p.ref_phase[k], p.delay[k]);
    kern::cadd(out.y.data(), src.data(), out.y.size());
  }
  return out;
}

TwoOccurrence make_two_occurrence(std::uint64_t seed, const StftConfig& cfg) {
  cfg.validate();
  Rng rng(seed);
  TwoOccurrence two;
  two.cfg = cfg;
  two.frame_a = 8;
  two.frame_b = 100;

  const std::size_t fundamental = 14 + rng.below(13);
  const double decay = decay_for_t60(rng.uniform(0.006, 0.012), cfg.sample_rate);
  const DampedSpec spec = harmonic_spec(fundamental, 4, decay, cfg, rng);
  two.eta = 1 + rng.below(32);

  // The fast decay makes each strike a burst that its analysis window captures
  // whole, near the flat top of the window; delaying such a burst rotates the
  // column by a clean ramp in f. pad centers the burst energy on the window
  // peak for the first strike; the second is additionally delayed by eta.
  const std::size_t pad = 248;
  const std::size_t len = static_cast<std::size_t>(1.5 * cfg.sample_rate);
  require(two.frame_b + 1 < cfg.frame_count(len), "make_two_occurrence: buffer too short");
  two.samples.assign(len, 0.0);
  add_damped(two.samples, spec, two.frame_a * cfg.hop + pad, rng.uniform(0.5, 1.0),
             cfg.sample_rate);
  add_damped(two.samples, spec, two.frame_b * cfg.hop + pad + two.eta, rng.uniform(0.5, 1.0),
             cfg.sample_rate);
  return two;
}

}  // namespace phaserep
