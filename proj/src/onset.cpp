#include "phaserep/onset.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "phaserep/kernels.hpp"

namespace phaserep {

std::vector<double> spectral_flux(const Spectrogram& spec) {
  const std::size_t F = spec.bins(), T = spec.frames();
  const Mat<double> mag = magnitudes(spec);
  std::vector<double> flux(T, 0.0);
  if (T == 0) return flux;
  const std::vector<double> zeros(F, 0.0);
  flux[0] = kern::hwr_diff_sum(mag.col(0), zeros.data(), F);
  for (std::size_t t = 1; t < T; ++t)
    flux[t] = kern::hwr_diff_sum(mag.col(t), mag.col(t - 1), F);
  return flux;
}

std::vector<std::size_t> detect_onsets(const Spectrogram& spec, const OnsetConfig& cfg) {
  require(cfg.threshold >= 0.0 && cfg.threshold <= 1.0, "threshold must be in [0, 1]");
  const std::vector<double> flux = spectral_flux(spec);
  const std::size_t T = flux.size();
  double peak = 0.0;
  for (double v : flux) peak = std::max(peak, v);
  if (peak <= 0.0) return {};
  const double gate = cfg.threshold * peak;

  // local maxima above the gate; plateaus resolve to their last frame
  std::vector<std::size_t> cand;
  for (std::size_t t = 0; t < T; ++t) {
    if (flux[t] <= 0.0 || flux[t] < gate) continue;
    const bool rising = t == 0 || flux[t] >= flux[t - 1];
    const bool falling = t + 1 == T || flux[t] > flux[t + 1];
    if (rising && falling) cand.push_back(t);
  }

  // strongest-first suppression within min_gap
  std::vector<std::size_t> order(cand.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (flux[cand[a]] != flux[cand[b]]) return flux[cand[a]] > flux[cand[b]];
    return cand[a] < cand[b];
  });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const std::size_t t = cand[i];
    bool blocked = false;
    for (std::size_t s : kept) {
      const std::size_t d = t > s ? t - s : s - t;
      if (d < cfg.min_gap) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(t);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

OnsetMatrix extract_onset_matrix(const Spectrogram& spec, const std::vector<std::size_t>& frames) {
  require(!frames.empty(), "onset frame list is empty");
  OnsetMatrix y(spec.bins(), frames.size());
  for (std::size_t m = 0; m < frames.size(); ++m) {
    require(frames[m] < spec.frames(), "onset frame out of range");
    std::copy(spec.x.col(frames[m]), spec.x.col(frames[m]) + spec.bins(), y.col(m));
  }
  return y;
}

Mat<double> gather_columns(const Mat<double>& track, const std::vector<std::size_t>& frames) {
  require(!frames.empty(), "onset frame list is empty");
  Mat<double> out(track.rows(), frames.size());
  for (std::size_t m = 0; m < frames.size(); ++m) {
    require(frames[m] < track.cols(), "onset frame out of range");
    std::copy(track.col(frames[m]), track.col(frames[m]) + track.rows(), out.col(m));
  }
  return out;
}

std::vector<std::size_t> read_onset_list(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open onset list: " + path);
  std::vector<std::size_t> onsets;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    char* end = nullptr;
    const long long v = std::strtoll(line.c_str(), &end, 10);
    if (end == line.c_str() || v < 0)
      throw std::runtime_error("malformed onset list line: " + line);
    onsets.push_back(std::size_t(v));
  }
  return onsets;
}

void write_onset_list(const std::string& path, const std::vector<std::size_t>& onsets) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write onset list: " + path);
  for (std::size_t t : onsets) f << t << "\n";
}

}  // namespace phaserep
