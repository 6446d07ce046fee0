#include "phaserep/stft.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Per-size transform tables. The power-of-two path is an iterative radix-2
// FFT; other sizes fall back to direct evaluation against precomputed
// phasor planes. Both compute the same full-band transform.
struct Plan {
  std::size_t n = 0;
  bool pow2 = false;

  // radix-2 tables
  std::vector<std::size_t> bitrev;
  std::vector<cplx> twiddle;  // e^{-2i pi j / n}, j < n/2

  // direct-path planes, column f holds the length-n phasor row for bin f
  Mat<double> fwd_re, fwd_im;   // e^{-2i pi f n / F}
  Mat<double> inv_re, inv_im;   // e^{+2i pi n f / F}, column per sample index

  explicit Plan(std::size_t size) : n(size), pow2(is_pow2(size)) {
    // base[j] = e^{-2i pi j / n}; products f*n reduce exactly via integer mod
    std::vector<cplx> base(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double th = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
      base[j] = cplx(std::cos(th), std::sin(th));
    }
    if (pow2) {
      twiddle.assign(base.begin(), base.begin() + n / 2);
      bitrev.resize(n);
      std::size_t bits = 0;
      while ((std::size_t(1) << bits) < n) ++bits;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
          if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (bits - 1 - b);
        bitrev[i] = r;
      }
    } else {
      fwd_re = Mat<double>(n, n);
      fwd_im = Mat<double>(n, n);
      inv_re = Mat<double>(n, n);
      inv_im = Mat<double>(n, n);
      for (std::size_t f = 0; f < n; ++f) {
        double* fre = fwd_re.col(f);
        double* fim = fwd_im.col(f);
        double* ire = inv_re.col(f);
        double* iim = inv_im.col(f);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx w = base[(f * k) % n];
          fre[k] = w.real();
          fim[k] = w.imag();
          ire[k] = w.real();   // cos(2 pi f k / n), even in the sign flip
          iim[k] = -w.imag();  // sin(2 pi f k / n)
        }
      }
    }
  }

  void fft(cplx* a, bool inverse) const {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = bitrev[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t i = 0; i < n; i += len) {
        for (std::size_t k = 0; k < half; ++k) {
          cplx w = twiddle[k * step];
          if (inverse) w = std::conj(w);
          const cplx u = a[i + k];
          const cplx v = a[i + k + half] * w;
          a[i + k] = u + v;
          a[i + k + half] = u - v;
        }
      }
    }
  }
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<Plan>(n);
  return slot;
}

}  // namespace

void StftConfig::validate() const {
  require(sample_rate > 0.0, "sample_rate must be positive");
  require(window > 0 && hop > 0, "window and hop must be positive");
  require(hop <= window, "hop must not exceed the window length");
  require(window % hop == 0, "hop must divide the window length");
  require(bins == window, "transform length must equal the window length");
}

std::size_t StftConfig::frame_count(std::size_t len) const {
  validate();
  require(len >= window, "signal shorter than one analysis window");
  return (len - window) / hop + 1;
}

std::vector<double> cola_window(const StftConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.window;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n)));
  // normalize so that sum_j w^2(r + j*hop) == 1 on the infinite hop lattice
  double peak = 0.0;
  for (std::size_t r = 0; r < cfg.hop; ++r) {
    double s = 0.0;
    for (std::size_t q = r; q < n; q += cfg.hop) s += w[q] * w[q];
    if (s > peak) peak = s;
  }
  const double scale = 1.0 / std::sqrt(peak);
  for (double& v : w) v *= scale;
  return w;
}

Spectrogram stft(const double* x, std::size_t len, const StftConfig& cfg) {
  const std::size_t frames = cfg.frame_count(len);
  const std::size_t n = cfg.window;
  const auto plan = plan_for(cfg.bins);
  const std::vector<double> w = cola_window(cfg);

  Spectrogram spec{Mat<cplx>(cfg.bins, frames), cfg};
  std::vector<double> xw(n);
  std::vector<cplx> buf(n);
  for (std::size_t t = 0; t < frames; ++t) {
    kern::vmul(x + t * cfg.hop, w.data(), xw.data(), n);
    cplx* out = spec.x.col(t);
    if (plan->pow2) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = cplx(xw[i], 0.0);
      plan->fft(buf.data(), false);
      std::copy(buf.begin(), buf.end(), out);
    } else {
      for (std::size_t f = 0; f < cfg.bins; ++f)
        out[f] = cplx(kern::dot(xw.data(), plan->fwd_re.col(f), n),
                      kern::dot(xw.data(), plan->fwd_im.col(f), n));
    }
  }
  return spec;
}

Spectrogram stft(const std::vector<double>& x, const StftConfig& cfg) {
  return stft(x.data(), x.size(), cfg);
}

std::vector<double> istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.cfg;
  cfg.validate();
  require(spec.x.rows() == cfg.bins, "spectrogram row count does not match the configuration");
  require(spec.x.cols() > 0, "spectrogram has no frames");

  const std::size_t n = cfg.window;
  const std::size_t frames = spec.x.cols();
  const std::size_t len = n + (frames - 1) * cfg.hop;
  const auto plan = plan_for(cfg.bins);
  const std::vector<double> w = cola_window(cfg);
  const double inv_n = 1.0 / static_cast<double>(cfg.bins);

  std::vector<double> out(len, 0.0);
  std::vector<double> wpow(len, 0.0);
  std::vector<cplx> buf(n);
  std::vector<double> frame(n);
  std::vector<double> re(cfg.bins), im(cfg.bins);

  for (std::size_t t = 0; t < frames; ++t) {
    const cplx* col = spec.x.col(t);
    if (plan->pow2) {
      std::copy(col, col + n, buf.begin());
      plan->fft(buf.data(), true);
      for (std::size_t i = 0; i < n; ++i) frame[i] = buf[i].real() * inv_n;
    } else {
      for (std::size_t f = 0; f < cfg.bins; ++f) {
        re[f] = col[f].real();
        im[f] = col[f].imag();
      }
      for (std::size_t i = 0; i < n; ++i)
        frame[i] = inv_n * (kern::dot(re.data(), plan->inv_re.col(i), cfg.bins) -
                            kern::dot(im.data(), plan->inv_im.col(i), cfg.bins));
    }
    double* dst = out.data() + t * cfg.hop;
    kern::acc_mul(dst, frame.data(), w.data(), n);
    kern::acc_sq(wpow.data() + t * cfg.hop, w.data(), n);
  }

  // normalize by the accumulated window power; edge samples with negligible
  // coverage stay zero
  for (std::size_t i = 0; i < len; ++i)
    out[i] = wpow[i] > 1e-8 ? out[i] / wpow[i] : 0.0;
  return out;
}

Mat<double> magnitudes(const Spectrogram& spec) {
  Mat<double> m(spec.x.rows(), spec.x.cols());
  kern::cabs(spec.x.data(), m.data(), spec.x.size());
  return m;
}

}  // namespace phaserep
