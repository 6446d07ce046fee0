#ifndef PHASEREP_PIPELINE_HPP
#define PHASEREP_PIPELINE_HPP

#include <vector>

#include "phaserep/estimation.hpp"
#include "phaserep/metrics.hpp"
#include "phaserep/onset.hpp"
#include "phaserep/stft.hpp"
#include "phaserep/synth.hpp"

namespace phaserep {

// Separation works with oracle magnitudes: the reference tracks provide each
// source's magnitude spectrogram, and the methods differ only in how they
// assign phases (and, for the mask, how magnitudes shape the mixture).
struct SeparationInput {
  std::vector<double> mixture;
  std::vector<std::vector<double>> references;  // per source, mixture-length
  std::vector<std::size_t> onset_frames;        // empty: detect from the mixture
  StftConfig cfg;
  OnsetConfig onset_cfg;
};

struct SeparationOutput {
  std::vector<std::vector<double>> estimates;  // mixture-length tracks
  std::vector<Scores> scores;
  std::vector<double> cost_trace;         // empty for the mask method
  std::vector<std::size_t> onset_frames;  // frames actually used (empty for mask)
};

// Magnitude-ratio masking of the mixture spectrogram.
SeparationOutput separate_mask(const SeparationInput& in, double exponent = 2.0);

// Onset-phase estimation on the mixture's onset columns followed by phase
// propagation across each source's magnitude track. Strict mode derives the
// propagated onset phases from the reference-phase/delay parameterization.
enum class EstimationMode { strict, relaxed };
SeparationOutput separate_unwrap(const SeparationInput& in,
                                 const EstimationConfig& cfg = EstimationConfig{},
                                 EstimationMode mode = EstimationMode::relaxed);

// Onset-column view of a scene: mixture columns, per-source truth columns,
// and oracle magnitudes, everything the estimators and the mask baseline need
// to be compared on onset reconstruction error.
struct OnsetExperiment {
  OnsetMatrix y;
  std::vector<OnsetMatrix> truth;
  std::vector<Mat<double>> mags;
  std::vector<std::size_t> onset_frames;
};

OnsetExperiment onset_experiment(const Scene& scene);

// The mask baseline restricted to the onset columns.
std::vector<OnsetMatrix> mask_onset_estimates(const OnsetExperiment& ex, double exponent = 2.0);

}  // namespace phaserep

#endif  // PHASEREP_PIPELINE_HPP
