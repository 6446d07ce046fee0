#include "phaserep/unwrap.hpp"

#include <algorithm>
#include <cmath>

#include "phaserep/common.hpp"
#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

// Offset of the magnitude apex from its peak bin, in bins, from the quadratic
// through three log-magnitude samples. Degenerate curvature keeps the peak.
double peak_offset(double lm1, double l0, double lp1) {
  const double denom = lm1 - 2.0 * l0 + lp1;
  if (denom == 0.0 || !std::isfinite(denom)) return 0.0;
  double d = 0.5 * (lm1 - lp1) / denom;
  return std::clamp(d, -0.5, 0.5);
}

}  // namespace

std::vector<double> instantaneous_freqs(const double* mag_col, std::size_t bins) {
  require(bins > 0, "instantaneous_freqs: empty column");
  const std::size_t half = bins / 2;  // mirror boundary; bins [0, half] are lower
  std::vector<double> freq(bins);

  // Local peaks on the lower half (plateau edges count once).
  std::vector<std::size_t> peaks;
  for (std::size_t f = 0; f <= half; ++f) {
    const double m = mag_col[f];
    if (m <= 0.0) continue;
    const bool rise = (f == 0) || mag_col[f - 1] < m;
    const bool fall = (f == half) || mag_col[f + 1] <= m;
    if (rise && fall) peaks.push_back(f);
  }

  // Refined frequency (cycles/sample) of each peak.
  std::vector<double> peak_freq(peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const std::size_t p = peaks[i];
    double delta = 0.0;
    if (p > 0 && p < bins - 1 && mag_col[p - 1] > 0.0 && mag_col[p + 1] > 0.0) {
      delta = peak_offset(std::log(mag_col[p - 1]), std::log(mag_col[p]),
                          std::log(mag_col[p + 1]));
    }
    peak_freq[i] = (static_cast<double>(p) + delta) / static_cast<double>(bins);
  }

  // Assign each lower bin its nearest peak's frequency (ties go to the lower
  // peak); no peaks -> bin center.
  std::size_t cursor = 0;
  for (std::size_t f = 0; f <= half; ++f) {
    if (peaks.empty()) {
      freq[f] = static_cast<double>(f) / static_cast<double>(bins);
      continue;
    }
    const auto dist = [f](std::size_t p) {
      const long long d = static_cast<long long>(p) - static_cast<long long>(f);
      return d < 0 ? -d : d;
    };
    while (cursor + 1 < peaks.size() && dist(peaks[cursor + 1]) < dist(peaks[cursor]))
      ++cursor;
    freq[f] = peak_freq[cursor];
  }

  // Mirror: bin F-f advances opposite to bin f.
  for (std::size_t f = half + 1; f < bins; ++f) freq[f] = -freq[bins - f];
  return freq;
}

Mat<double> unwrap_phases(const Mat<double>& mag_track, const Mat<double>& onset_phase,
                          const std::vector<std::size_t>& onset_frames,
                          const StftConfig& cfg) {
  cfg.validate();
  const std::size_t F = mag_track.rows();
  const std::size_t T = mag_track.cols();
  require(F == cfg.bins, "unwrap_phases: magnitude rows must match bins");
  require(onset_phase.rows() == F, "unwrap_phases: onset phase rows must match bins");
  require(onset_phase.cols() == onset_frames.size(),
          "unwrap_phases: one onset phase column per onset");
  require(!onset_frames.empty(), "unwrap_phases: at least one onset required");
  for (std::size_t m = 0; m < onset_frames.size(); ++m) {
    require(onset_frames[m] < T, "unwrap_phases: onset frame out of range");
    require(m == 0 || onset_frames[m] > onset_frames[m - 1],
            "unwrap_phases: onset frames must be strictly increasing");
  }

  Mat<double> phases(F, T);
  const double hop = static_cast<double>(cfg.hop);

  for (std::size_t m = 0; m < onset_frames.size(); ++m) {
    const std::size_t start = onset_frames[m];
    const std::size_t stop = m + 1 < onset_frames.size() ? onset_frames[m + 1] : T;
    std::copy(onset_phase.col(m), onset_phase.col(m) + F, phases.col(start));
    for (std::size_t t = start; t + 1 < stop; ++t) {
      const std::vector<double> freq = instantaneous_freqs(mag_track.col(t), F);
      double* next = phases.col(t + 1);
      const double* cur = phases.col(t);
      for (std::size_t f = 0; f < F; ++f)
        next[f] = wrap_phase(cur[f] + kTwoPi * freq[f] * hop);
    }
  }

  // The analysis windows of the last window/hop - 1 frames before an onset
  // already overlap the attack, so those frames are dominated by the incoming
  // note, not by the tail of the previous region. Extend each onset's phases
  // backward over that span by inverting the per-frame step. A frame that
  // sees only the head of the note is not the steady pattern, though: with
  // the attack c samples into the window, the lobe around each peak picks up
  // a linear phase tilt of -pi*(f - peak)*c/F (the chunk's energy centroid
  // sits at (c+F)/2 instead of F/2), so each backward step also adds the
  // tilt increment for c growing by one hop. Before the first onset the fill
  // runs all the way back; far enough out the magnitudes are zero and the
  // phases stop mattering.
  const std::size_t lookback = cfg.window / cfg.hop - 1;
  const double bins_f = static_cast<double>(F);
  for (std::size_t m = 0; m < onset_frames.size(); ++m) {
    const std::size_t start = onset_frames[m];
    std::size_t floor = 0;
    if (m > 0) {
      floor = onset_frames[m - 1] + 1;
      if (start - floor > lookback) floor = start - lookback;
    }
    for (std::size_t t = start; t-- > floor;) {
      const std::vector<double> freq = instantaneous_freqs(mag_track.col(t), F);
      double* cur = phases.col(t);
      const double* next = phases.col(t + 1);
      for (std::size_t f = 0; f < F; ++f) {
        const double peak = freq[f] >= 0.0 ? freq[f] * bins_f : bins_f + freq[f] * bins_f;
        const double u = static_cast<double>(f) - peak;
        cur[f] = wrap_phase(next[f] - kTwoPi * freq[f] * hop - kPi * u * hop / bins_f);
      }
    }
  }
  return phases;
}

Spectrogram compose(const Mat<double>& mag_track, const Mat<double>& phases,
                    const StftConfig& cfg) {
  require(mag_track.same_shape(phases), "compose: magnitude/phase shape mismatch");
  Spectrogram out;
  out.cfg = cfg;
  out.x = Mat<cplx>(mag_track.rows(), mag_track.cols());
  const std::size_t n = mag_track.size();
  std::vector<cplx> phasor(n);
  kern::unit_phasor(phases.data(), phasor.data(), n);
  kern::real_cmul(mag_track.data(), phasor.data(), out.x.data(), n);
  return out;
}

Spectrogram unwrap_source(const Mat<double>& mag_track, const Mat<double>& onset_phase,
                          const std::vector<std::size_t>& onset_frames,
                          const StftConfig& cfg) {
  return compose(mag_track, unwrap_phases(mag_track, onset_phase, onset_frames, cfg), cfg);
}

}  // namespace phaserep
