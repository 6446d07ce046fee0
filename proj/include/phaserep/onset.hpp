#ifndef PHASEREP_ONSET_HPP
#define PHASEREP_ONSET_HPP

#include <string>
#include <vector>

#include "phaserep/phase_model.hpp"
#include "phaserep/stft.hpp"

namespace phaserep {

struct OnsetConfig {
  double threshold = 0.3;   // relative to the maximum flux
  std::size_t min_gap = 4;  // minimum frame distance between reported onsets
};

// Half-wave rectified spectral flux per frame; frame 0 is compared against
// silence. Scales linearly with the input, so the relative threshold makes
// detection gain-invariant.
std::vector<double> spectral_flux(const Spectrogram& spec);

// Flux peaks above threshold * max(flux), at least min_gap frames apart
// (stronger peaks win ties). Returns sorted frame indices; silence yields none.
std::vector<std::size_t> detect_onsets(const Spectrogram& spec, const OnsetConfig& cfg = {});

// Gather spectrogram columns at the given frames into an onset matrix.
OnsetMatrix extract_onset_matrix(const Spectrogram& spec, const std::vector<std::size_t>& frames);

// Same gather for a magnitude (or any real) track.
Mat<double> gather_columns(const Mat<double>& track, const std::vector<std::size_t>& frames);

// Plain text onset lists: one frame index per line.
std::vector<std::size_t> read_onset_list(const std::string& path);
void write_onset_list(const std::string& path, const std::vector<std::size_t>& onsets);

}  // namespace phaserep

#endif  // PHASEREP_ONSET_HPP
