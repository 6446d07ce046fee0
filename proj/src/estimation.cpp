#include "phaserep/estimation.hpp"

#include <cmath>

#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

// angle of each aggregate, keeping prev where the aggregate vanishes
void arg_or_keep(const cplx* s, const double* prev, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (s[i].real() == 0.0 && s[i].imag() == 0.0) ? prev[i] : wrap_phase(std::arg(s[i]));
}

std::vector<double> squares(const double* a, std::size_t n) {
  std::vector<double> a2(n);
  kern::vmul(a, a, a2.data(), n);
  return a2;
}

}  // namespace

std::vector<double> update_ref_phase_strict(const Mat<cplx>& feedback, const Mat<double>& mag,
                                            const std::vector<double>& delay,
                                            const std::vector<double>& prev) {
  const std::size_t F = feedback.rows(), M = feedback.cols();
  require(mag.rows() == F && mag.cols() == M && delay.size() == M && prev.size() == F,
          "update_ref_phase_strict: shape mismatch");
  std::vector<cplx> acc(F, cplx(0.0, 0.0)), r(F);
  for (std::size_t m = 0; m < M; ++m) {
    kern::unit_ramp(delay[m], r.data(), F);
    kern::acc_rot_conj(acc.data(), feedback.col(m), mag.col(m), r.data(), F);
  }
  std::vector<double> out(F);
  arg_or_keep(acc.data(), prev.data(), out.data(), F);
  return out;
}

std::vector<double> update_ref_phase_relaxed(const Mat<double>& onset_phase,
                                             const Mat<double>& mag,
                                             const std::vector<double>& delay,
                                             const std::vector<double>& prev) {
  const std::size_t F = onset_phase.rows(), M = onset_phase.cols();
  require(mag.rows() == F && mag.cols() == M && delay.size() == M && prev.size() == F,
          "update_ref_phase_relaxed: shape mismatch");
  std::vector<cplx> acc(F, cplx(0.0, 0.0)), r(F), v(F);
  for (std::size_t m = 0; m < M; ++m) {
    kern::unit_ramp(delay[m], r.data(), F);
    kern::unit_phasor(onset_phase.col(m), v.data(), F);
    const std::vector<double> a2 = squares(mag.col(m), F);
    kern::acc_rot_conj(acc.data(), v.data(), a2.data(), r.data(), F);
  }
  std::vector<double> out(F);
  arg_or_keep(acc.data(), prev.data(), out.data(), F);
  return out;
}

Mat<double> update_onset_phase(const Mat<cplx>& feedback, const Mat<double>& mag, double sigma,
                               const std::vector<double>& ref_phase,
                               const std::vector<double>& delay, const Mat<double>& prev) {
  const std::size_t F = feedback.rows(), M = feedback.cols();
  require(mag.rows() == F && mag.cols() == M && ref_phase.size() == F && delay.size() == M &&
              prev.rows() == F && prev.cols() == M,
          "update_onset_phase: shape mismatch");
  require(sigma >= 0.0, "sigma must be nonnegative");
  std::vector<cplx> u(F), r(F), s(F);
  kern::unit_phasor(ref_phase.data(), u.data(), F);
  Mat<double> out(F, M);
  for (std::size_t m = 0; m < M; ++m) {
    kern::unit_ramp(delay[m], r.data(), F);
    const std::vector<double> a2 = squares(mag.col(m), F);
    kern::phase_pull(feedback.col(m), mag.col(m), a2.data(), sigma, u.data(), r.data(), s.data(), F);
    arg_or_keep(s.data(), prev.col(m), out.col(m), F);
  }
  return out;
}

double slope_estimate(const cplx* v, std::size_t n, double fallback) {
  if (n < 2) return fallback;
  const cplx z = kern::cdot_conj(v, v + 1, n - 1);
  if (z.real() == 0.0 && z.imag() == 0.0) return fallback;
  return wrap_phase(std::arg(z));
}

std::vector<double> update_delay_strict(const Mat<cplx>& feedback, const Mat<double>& mag,
                                        const std::vector<double>& ref_phase,
                                        const std::vector<double>& prev) {
  const std::size_t F = feedback.rows(), M = feedback.cols();
  require(mag.rows() == F && mag.cols() == M && ref_phase.size() == F && prev.size() == M,
          "update_delay_strict: shape mismatch");
  std::vector<cplx> u(F), beta(F);
  kern::unit_phasor(ref_phase.data(), u.data(), F);
  std::vector<double> out(prev);
  for (std::size_t m = 1; m < M; ++m) {
    kern::cmul_conj(feedback.col(m), u.data(), beta.data(), F);
    // A silent bin says nothing about the slope; drop it from both lag-1 pairs.
    const double* a = mag.col(m);
    for (std::size_t f = 0; f < F; ++f)
      if (a[f] == 0.0) beta[f] = cplx{};
    out[m] = slope_estimate(beta.data(), F, prev[m]);
  }
  return out;
}

std::vector<double> update_delay_relaxed(const Mat<double>& onset_phase, const Mat<double>& mag,
                                         const std::vector<double>& ref_phase,
                                         const std::vector<double>& prev) {
  const std::size_t F = onset_phase.rows(), M = onset_phase.cols();
  require(mag.rows() == F && mag.cols() == M && ref_phase.size() == F && prev.size() == M,
          "update_delay_relaxed: shape mismatch");
  std::vector<cplx> u(F), v(F), gamma(F);
  kern::unit_phasor(ref_phase.data(), u.data(), F);
  std::vector<double> out(prev);
  for (std::size_t m = 1; m < M; ++m) {
    kern::unit_phasor(onset_phase.col(m), v.data(), F);
    kern::real_cmul_conj(mag.col(m), v.data(), u.data(), gamma.data(), F);
    out[m] = slope_estimate(gamma.data(), F, prev[m]);
  }
  return out;
}

namespace {

struct Loop {
  const OnsetMatrix& y;
  PhaseParams params;
  std::vector<Mat<cplx>> sources;
  Mat<cplx> mix;
  Mat<cplx> fb;

  Loop(const OnsetMatrix& y_in, const PhaseParams& init) : y(y_in), params(init) {
    require(y.rows() > 0 && y.cols() > 0, "onset matrix is empty");
    params.validate(y.rows(), y.cols());
    params.wrap();
    fb = Mat<cplx>(y.rows(), y.cols());
  }

  void rebuild_mix() {
    mix = Mat<cplx>(y.rows(), y.cols());
    for (const auto& s : sources) kern::cadd(mix.data(), s.data(), mix.size());
  }

  void refresh_feedback(std::size_t k) {
    kern::residual(y.data(), mix.data(), sources[k].data(), fb.data(), y.size());
  }

  EstimationResult finish(std::vector<double> trace) const {
    EstimationResult res;
    res.params = params;
    res.params.wrap();
    res.synth.source = sources;
    res.synth.mix = mix;
    res.synth.feedback.resize(sources.size());
    for (std::size_t k = 0; k < sources.size(); ++k) {
      res.synth.feedback[k] = Mat<cplx>(y.rows(), y.cols());
      kern::residual(y.data(), mix.data(), sources[k].data(), res.synth.feedback[k].data(), y.size());
    }
    res.cost_trace = std::move(trace);
    return res;
  }
};

}  // namespace

EstimationResult run_strict(const OnsetMatrix& y, const PhaseParams& init,
                            const EstimationConfig& cfg) {
  Loop st(y, init);
  const std::size_t K = st.params.sources();
  st.sources.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    st.sources[k] = strict_source(st.params.mag[k], st.params.ref_phase[k], st.params.delay[k]);
  st.rebuild_mix();

  std::vector<double> trace;
  trace.reserve(cfg.iterations + 1);
  trace.push_back(kern::dist_sq(y.data(), st.mix.data(), y.size()));

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t k = 0; k < K; ++k) {
      st.refresh_feedback(k);
      st.params.ref_phase[k] = update_ref_phase_strict(st.fb, st.params.mag[k],
                                                       st.params.delay[k], st.params.ref_phase[k]);
      st.params.delay[k] = update_delay_strict(st.fb, st.params.mag[k], st.params.ref_phase[k],
                                               st.params.delay[k]);
      st.sources[k] = strict_source(st.params.mag[k], st.params.ref_phase[k], st.params.delay[k]);
      st.rebuild_mix();
    }
    trace.push_back(kern::dist_sq(y.data(), st.mix.data(), y.size()));
  }
  return st.finish(std::move(trace));
}

EstimationResult run_relaxed(const OnsetMatrix& y, const PhaseParams& init,
                             const EstimationConfig& cfg) {
  require(cfg.sigma >= 0.0, "sigma must be nonnegative");
  Loop st(y, init);
  const std::size_t K = st.params.sources();
  st.sources.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    st.sources[k] = relaxed_source(st.params.mag[k], st.params.onset_phase[k]);
  st.rebuild_mix();

  std::vector<double> trace;
  trace.reserve(cfg.iterations + 1);
  trace.push_back(relaxed_cost(y, st.params, cfg.sigma));

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t k = 0; k < K; ++k) {
      st.refresh_feedback(k);
      st.params.onset_phase[k] =
          update_onset_phase(st.fb, st.params.mag[k], cfg.sigma, st.params.ref_phase[k],
                             st.params.delay[k], st.params.onset_phase[k]);
      st.params.ref_phase[k] = update_ref_phase_relaxed(
          st.params.onset_phase[k], st.params.mag[k], st.params.delay[k], st.params.ref_phase[k]);
      st.params.delay[k] = update_delay_relaxed(st.params.onset_phase[k], st.params.mag[k],
                                                st.params.ref_phase[k], st.params.delay[k]);
      st.sources[k] = relaxed_source(st.params.mag[k], st.params.onset_phase[k]);
      st.rebuild_mix();
    }
    trace.push_back(relaxed_cost(y, st.params, cfg.sigma));
  }
  return st.finish(std::move(trace));
}

}  // namespace phaserep
