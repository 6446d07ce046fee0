#ifndef PHASEREP_PHASE_MODEL_HPP
#define PHASEREP_PHASE_MODEL_HPP

#include <cstdint>
#include <vector>

#include "phaserep/common.hpp"

namespace phaserep {

// Mixture STFT columns extracted at the onset frames (bins x onsets).
using OnsetMatrix = Mat<cplx>;

// The model: each source k contributes mag^k(f,m) * exp(i * phase) at onset m,
// where the strict phase is ref_phase^k(f) + delay^k(m) * f (an occurrence is
// the reference pattern shifted in time, which is a per-bin linear phase) and
// the relaxed phase is a free onset_phase^k(f,m) tied to the strict one by a
// quadratic penalty. delay^k(0) is pinned to zero: the first occurrence is the
// reference. Occurrence gain differences are absorbed into mag.
struct PhaseParams {
  std::vector<std::vector<double>> ref_phase;  // K x F
  std::vector<std::vector<double>> delay;      // K x M, radians per bin
  std::vector<Mat<double>> onset_phase;        // K x (F x M)
  std::vector<Mat<double>> mag;                // K x (F x M), nonnegative

  std::size_t sources() const { return mag.size(); }
  std::size_t bins() const { return mag.empty() ? 0 : mag[0].rows(); }
  std::size_t onsets() const { return mag.empty() ? 0 : mag[0].cols(); }

  void wrap();                                        // wrap all phases to (-pi, pi]
  void validate(std::size_t F, std::size_t M) const;  // shapes, finiteness, delay[k][0]==0
};

struct Synthesis {
  std::vector<Mat<cplx>> source;    // per-source model output at the onsets
  Mat<cplx> mix;                    // sum over sources
  std::vector<Mat<cplx>> feedback;  // y - mix + source[k] (leave-one-out target)
};

// Single-source model outputs.
Mat<cplx> strict_source(const Mat<double>& mag, const std::vector<double>& ref_phase,
                        const std::vector<double>& delay);
Mat<cplx> relaxed_source(const Mat<double>& mag, const Mat<double>& onset_phase);

Synthesis synthesize_strict(const OnsetMatrix& y, const PhaseParams& p);
Synthesis synthesize_relaxed(const OnsetMatrix& y, const PhaseParams& p);

// Squared-error costs. The strict cost is |Y - mix|_F^2 with the strict
// synthesis; the relaxed cost uses the free onset phases plus
// sigma * sum mag^2 |e^{i onset_phase} - e^{i(ref_phase + delay f)}|^2.
double strict_cost(const OnsetMatrix& y, const PhaseParams& p);
double relaxed_cost(const OnsetMatrix& y, const PhaseParams& p, double sigma);

// Default initialization: ref_phase from the first onset column's phase,
// zero delays, onset_phase from the observed column phases.
PhaseParams default_init(const OnsetMatrix& y, std::vector<Mat<double>> mags);

// Seeded uniform-random phases (delay[k][0] stays 0); used by Monte-Carlo tests.
PhaseParams random_init(const OnsetMatrix& y, std::vector<Mat<double>> mags, std::uint64_t seed);

}  // namespace phaserep

#endif  // PHASEREP_PHASE_MODEL_HPP
