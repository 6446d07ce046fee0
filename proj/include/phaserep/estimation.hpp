#ifndef PHASEREP_ESTIMATION_HPP
#define PHASEREP_ESTIMATION_HPP

#include <vector>

#include "phaserep/phase_model.hpp"

namespace phaserep {

struct EstimationConfig {
  std::size_t iterations = 100;  // fixed sweep count, no early stopping
  double sigma = 0.2;            // relaxed prior weight; the strict path ignores it
  // The update order is fixed: sources in index order; within a source the
  // steps follow the coordinate scheme (onset phases where applicable, then
  // reference phase, then delays, then resynthesis and feedback refresh).
};

struct EstimationResult {
  PhaseParams params;
  Synthesis synth;                 // synthesis of the final parameters
  std::vector<double> cost_trace;  // cost_trace[i] = cost after sweep i; [0] is the initial cost
};

// Single coordinate updates, exposed for verification. Each returns the new
// value; a zero aggregate leaves the previous entry unchanged, and all
// returned angles are wrapped to (-pi, pi].

// argmin over ref_phase of the strict cost given delays: angle of
// sum_m feedback(f,m) * mag(f,m) * exp(-i delay(m) f).
std::vector<double> update_ref_phase_strict(const Mat<cplx>& feedback, const Mat<double>& mag,
                                            const std::vector<double>& delay,
                                            const std::vector<double>& prev);

// argmin over ref_phase of the relaxed penalty: angle of
// sum_m mag^2 exp(i onset_phase(f,m)) exp(-i delay(m) f).
std::vector<double> update_ref_phase_relaxed(const Mat<double>& onset_phase, const Mat<double>& mag,
                                             const std::vector<double>& delay,
                                             const std::vector<double>& prev);

// argmin over onset_phase(f,m) of the relaxed cost: angle of
// feedback * mag + sigma * mag^2 * exp(i(ref_phase + delay(m) f)).
Mat<double> update_onset_phase(const Mat<cplx>& feedback, const Mat<double>& mag, double sigma,
                               const std::vector<double>& ref_phase,
                               const std::vector<double>& delay, const Mat<double>& prev);

// Shift-invariance estimate of a per-bin linear phase slope: the angle of
// sum_f conj(v(f)) v(f+1). Exact when v(f) = a(f) exp(i slope f) with
// nonnegative a; a least-squares consensus otherwise. Returns fallback when
// the aggregate is zero (needs at least two bins to say anything).
double slope_estimate(const cplx* v, std::size_t n, double fallback);

// Delay updates for occurrences m >= 1 (m = 0 is the pinned reference).
// Strict flavor feeds the slope estimator with feedback * exp(-i ref_phase);
// the relaxed flavor uses mag * exp(i onset_phase) * exp(-i ref_phase).
std::vector<double> update_delay_strict(const Mat<cplx>& feedback, const Mat<double>& mag,
                                        const std::vector<double>& ref_phase,
                                        const std::vector<double>& prev);
std::vector<double> update_delay_relaxed(const Mat<double>& onset_phase, const Mat<double>& mag,
                                         const std::vector<double>& ref_phase,
                                         const std::vector<double>& prev);

// Full coordinate-descent runs. init supplies both the starting phases and
// the (fixed) per-source magnitudes.
EstimationResult run_strict(const OnsetMatrix& y, const PhaseParams& init,
                            const EstimationConfig& cfg);
EstimationResult run_relaxed(const OnsetMatrix& y, const PhaseParams& init,
                             const EstimationConfig& cfg);

}  // namespace phaserep

#endif  // PHASEREP_ESTIMATION_HPP
