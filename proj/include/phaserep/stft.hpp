#ifndef PHASEREP_STFT_HPP
#define PHASEREP_STFT_HPP

#include <cstddef>
#include <vector>

#include "phaserep/common.hpp"

namespace phaserep {

// Analysis/synthesis configuration. The transform length equals the window
// length (no zero padding) and the hop must divide the window so the frame
// grid tiles exactly.
struct StftConfig {
  double sample_rate = 11025.0;
  std::size_t window = 512;
  std::size_t hop = 128;
  std::size_t bins = 512;

  void validate() const;

  // Number of frames for a signal of length len: floor((len - window)/hop) + 1.
  // Trailing samples that do not fill a whole window are dropped.
  std::size_t frame_count(std::size_t len) const;
};

struct Spectrogram {
  Mat<cplx> x;  // bins x frames, column per frame
  StftConfig cfg;

  std::size_t bins() const { return x.rows(); }
  std::size_t frames() const { return x.cols(); }
};

// Hann window scaled so the squared windows overlap-add to one on the hop
// lattice (checked numerically; exact for hop <= window/4 with a periodic
// Hann). With that scaling istft is a plain weighted overlap-add.
std::vector<double> cola_window(const StftConfig& cfg);

Spectrogram stft(const double* x, std::size_t len, const StftConfig& cfg);
Spectrogram stft(const std::vector<double>& x, const StftConfig& cfg);

// Weighted overlap-add inverse: sum_t w(n-tS) * real(idft(X(.,t)))(n-tS)
// divided by sum_t w^2(n-tS). Output length is window + (frames-1)*hop.
// Imaginary parts of a non-symmetric spectrogram are discarded.
std::vector<double> istft(const Spectrogram& spec);

// Magnitude matrix |X|.
Mat<double> magnitudes(const Spectrogram& spec);

}  // namespace phaserep

#endif  // PHASEREP_STFT_HPP
