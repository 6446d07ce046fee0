#ifndef PHASEREP_UNWRAP_HPP
#define PHASEREP_UNWRAP_HPP

#include <vector>

#include "phaserep/stft.hpp"

namespace phaserep {

// Per-bin instantaneous frequencies (cycles per sample) for one magnitude
// column: each bin is governed by its nearest local magnitude peak on the
// lower half-spectrum, refined by quadratic interpolation of log magnitudes;
// upper bins mirror to the negative frequency. An all-zero column falls back
// to the bin-center frequencies.
std::vector<double> instantaneous_freqs(const double* mag_col, std::size_t bins);

// Propagate onset phases across a magnitude track. Column t_m (from
// onset_frames, sorted and strictly increasing) takes onset_phase column m
// unchanged; later frames of the region advance each bin by
// 2*pi*freq(f,t)*hop until the next onset. Frames before the first onset are
// filled by running the same step backward (they still hold attack bleed).
// Returns the bins x frames phase matrix.
Mat<double> unwrap_phases(const Mat<double>& mag_track, const Mat<double>& onset_phase,
                          const std::vector<std::size_t>& onset_frames, const StftConfig& cfg);

// mag .* exp(i phases) as a spectrogram.
Spectrogram compose(const Mat<double>& mag_track, const Mat<double>& phases,
                    const StftConfig& cfg);

// unwrap + compose: the source spectrogram whose magnitudes are mag_track and
// whose phases repeat the estimated onset phases.
Spectrogram unwrap_source(const Mat<double>& mag_track, const Mat<double>& onset_phase,
                          const std::vector<std::size_t>& onset_frames, const StftConfig& cfg);

}  // namespace phaserep

#endif  // PHASEREP_UNWRAP_HPP
