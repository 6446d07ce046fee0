#ifndef PHASEREP_WIENER_HPP
#define PHASEREP_WIENER_HPP

#include <vector>

#include "phaserep/phase_model.hpp"
#include "phaserep/stft.hpp"

namespace phaserep {

// Magnitude-ratio (Wiener-style) masking: source k receives
// x .* mag_k^exponent / sum_l mag_l^exponent, and bins whose denominator is
// zero go to zero. With the default exponent the mask is the classic
// power-spectrum ratio. The per-source outputs sum to x wherever any source
// has energy.
std::vector<Mat<cplx>> mask_split(const Mat<cplx>& x, const std::vector<Mat<double>>& mags,
                                  double exponent = 2.0);

std::vector<Spectrogram> mask_split(const Spectrogram& x, const std::vector<Mat<double>>& mags,
                                    double exponent = 2.0);

}  // namespace phaserep

#endif  // PHASEREP_WIENER_HPP
