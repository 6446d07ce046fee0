#include "phaserep/wiener.hpp"

#include <cmath>

#include "phaserep/kernels.hpp"

namespace phaserep {

std::vector<Mat<cplx>> mask_split(const Mat<cplx>& x, const std::vector<Mat<double>>& mags,
                                  double exponent) {
  require(!mags.empty(), "mask_split needs at least one source");
  require(exponent > 0.0, "mask exponent must be positive");
  const std::size_t n = x.size();
  for (const auto& m : mags) {
    require(m.rows() == x.rows() && m.cols() == x.cols(), "magnitude shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      const double v = m.data()[i];
      require(std::isfinite(v) && v >= 0.0, "magnitudes must be finite and nonnegative");
    }
  }

  const std::size_t K = mags.size();
  std::vector<std::vector<double>> w(K, std::vector<double>(n));
  for (std::size_t k = 0; k < K; ++k) {
    if (exponent == 2.0) {
      kern::vmul(mags[k].data(), mags[k].data(), w[k].data(), n);
    } else {
      for (std::size_t i = 0; i < n; ++i) w[k][i] = std::pow(mags[k].data()[i], exponent);
    }
  }
  std::vector<double> denom(n, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < n; ++i) denom[i] += w[k][i];

  std::vector<Mat<cplx>> out(K, Mat<cplx>(x.rows(), x.cols()));
  for (std::size_t k = 0; k < K; ++k)
    kern::mask_apply(x.data(), w[k].data(), denom.data(), out[k].data(), n);
  return out;
}

std::vector<Spectrogram> mask_split(const Spectrogram& x, const std::vector<Mat<double>>& mags,
                                    double exponent) {
  std::vector<Mat<cplx>> parts = mask_split(x.x, mags, exponent);
  std::vector<Spectrogram> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(Spectrogram{std::move(p), x.cfg});
  return out;
}

}  // namespace phaserep
