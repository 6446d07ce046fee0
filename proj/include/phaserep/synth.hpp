#ifndef PHASEREP_SYNTH_HPP
#define PHASEREP_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "phaserep/common.hpp"
#include "phaserep/phase_model.hpp"
#include "phaserep/stft.hpp"

namespace phaserep {

// One exponentially damped sinusoid: amp * sin(2*pi*freq_hz*age/Fs + phase)
// * exp(-decay*age), age in samples from the attack.
struct Partial {
  double freq_hz = 0.0;
  double amp = 1.0;
  double phase = 0.0;
  double decay = 0.0;  // per sample
};

struct DampedSpec {
  std::vector<Partial> partials;
};

// Harmonic stack: `count` partials at exact analysis bins fundamental_bin * p
// with amplitudes 1/p, a shared decay, and random initial phases.
DampedSpec harmonic_spec(std::size_t fundamental_bin, std::size_t count, double decay,
                         const StftConfig& cfg, Rng& rng);

// Mix one note occurrence into dst starting at onset_sample. Partials ring
// until their envelope falls below 1e-6 (or the buffer ends).
void add_damped(std::vector<double>& dst, const DampedSpec& spec,
                std::size_t onset_sample, double gain, double sample_rate);

struct SceneNote {
  std::size_t source = 0;
  std::size_t onset_index = 0;
  std::size_t sample = 0;  // attack position
  double gain = 1.0;
};

enum class SceneKind {
  disjoint,      // two sources, all partial bins at least 12 apart
  overlapped,    // two sources sharing their three strongest partial bins
  three_source,  // three sources, seven onsets, all activation subsets
};

struct Scene {
  StftConfig cfg;
  SceneKind kind = SceneKind::disjoint;
  std::vector<double> mixture;
  std::vector<std::vector<double>> sources;  // same length as mixture
  std::vector<std::size_t> onset_frames;     // shared onset grid, ascending
  std::vector<DampedSpec> specs;             // one per source
  std::vector<SceneNote> notes;
};

// Deterministic synthetic scene. Two-source kinds are 1.5 s with onsets at
// frames {8, 47, 86} activating source 0, source 1, then both; the
// three-source kind is 1.8 s, onsets {6, 23, 40, 57, 74, 91, 108}, cycling
// through every nonempty subset of sources. Attacks land exactly on their
// onset frame's first sample; gains are drawn from [0.5, 1].
Scene make_scene(SceneKind kind, std::uint64_t seed, const StftConfig& cfg = StftConfig{});

// Exact-model instance: random magnitudes and phase parameters, observation
// built through the same kernels the estimator uses, so a fit initialized at
// the truth has (numerically) zero cost. Onset columns follow the solo-first
// activation protocol (source k alone in column k, everyone in the rest), the
// same shape the scene generators produce; with fewer columns than sources
// the trailing sources are never solo.
struct ModelBuilt {
  OnsetMatrix y;
  PhaseParams truth;
};

ModelBuilt make_model_built(std::size_t sources, std::size_t bins, std::size_t onsets,
                            std::uint64_t seed);

// One percussive note struck twice. The second strike lands eta samples later
// relative to its frame than the first, and the decay is fast enough that each
// attack is a burst near the middle of its analysis window. Delaying a burst
// that both windows capture multiplies the column by e^{-2*pi*i*eta*f/F}, so
// the onset phase difference is linear in bin index with slope -2*pi*eta/F
// (eta is an integer, which keeps the rotation consistent across mirror bins).
struct TwoOccurrence {
  std::vector<double> samples;
  std::size_t frame_a = 0;
  std::size_t frame_b = 0;
  std::size_t eta = 0;  // samples, in [1, 32]
  StftConfig cfg;
};

TwoOccurrence make_two_occurrence(std::uint64_t seed, const StftConfig& cfg = StftConfig{});

}  // namespace phaserep

#endif  // PHASEREP_SYNTH_HPP
