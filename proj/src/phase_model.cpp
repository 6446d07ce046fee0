#include "phaserep/phase_model.hpp"

#include <cmath>

#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

bool all_finite(const double* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

bool all_finite(const cplx* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) return false;
  return true;
}

}  // namespace

void PhaseParams::wrap() {
  for (auto& row : ref_phase)
    for (double& v : row) v = wrap_phase(v);
  for (auto& row : delay)
    for (double& v : row) v = wrap_phase(v);
  for (auto& m : onset_phase)
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = wrap_phase(m.data()[i]);
}

void PhaseParams::validate(std::size_t F, std::size_t M) const {
  const std::size_t K = mag.size();
  require(K > 0, "model needs at least one source");
  require(ref_phase.size() == K && delay.size() == K && onset_phase.size() == K,
          "parameter blocks disagree on the source count");
  for (std::size_t k = 0; k < K; ++k) {
    require(ref_phase[k].size() == F, "ref_phase length must match the bin count");
    require(delay[k].size() == M, "delay length must match the onset count");
    require(onset_phase[k].rows() == F && onset_phase[k].cols() == M,
            "onset_phase shape must be bins x onsets");
    require(mag[k].rows() == F && mag[k].cols() == M, "mag shape must be bins x onsets");
    require(delay[k][0] == 0.0, "delay of the first occurrence must be zero");
    require(all_finite(ref_phase[k].data(), F), "non-finite ref_phase");
    require(all_finite(delay[k].data(), M), "non-finite delay");
    require(all_finite(onset_phase[k].data(), onset_phase[k].size()), "non-finite onset_phase");
    require(all_finite(mag[k].data(), mag[k].size()), "non-finite mag");
    for (std::size_t i = 0; i < mag[k].size(); ++i)
      require(mag[k].data()[i] >= 0.0, "mag must be nonnegative");
  }
}

Mat<cplx> strict_source(const Mat<double>& mag, const std::vector<double>& ref_phase,
                        const std::vector<double>& delay) {
  const std::size_t F = mag.rows(), M = mag.cols();
  require(ref_phase.size() == F && delay.size() == M, "parameter shape mismatch");
  std::vector<cplx> u(F), r(F);
  kern::unit_phasor(ref_phase.data(), u.data(), F);
  Mat<cplx> out(F, M);
  for (std::size_t m = 0; m < M; ++m) {
    kern::unit_ramp(delay[m], r.data(), F);
    kern::real_cmul2(mag.col(m), u.data(), r.data(), out.col(m), F);
  }
  return out;
}

Mat<cplx> relaxed_source(const Mat<double>& mag, const Mat<double>& onset_phase) {
  require(mag.rows() == onset_phase.rows() && mag.cols() == onset_phase.cols(),
          "parameter shape mismatch");
  const std::size_t n = mag.size();
  Mat<cplx> out(mag.rows(), mag.cols());
  std::vector<cplx> v(n);
  kern::unit_phasor(onset_phase.data(), v.data(), n);
  kern::real_cmul(mag.data(), v.data(), out.data(), n);
  return out;
}

namespace {

Synthesis assemble(const OnsetMatrix& y, std::vector<Mat<cplx>> sources) {
  const std::size_t F = y.rows(), M = y.cols();
  Synthesis s;
  s.source = std::move(sources);
  s.mix = Mat<cplx>(F, M);
  for (const auto& src : s.source) kern::cadd(s.mix.data(), src.data(), F * M);
  s.feedback.resize(s.source.size());
  for (std::size_t k = 0; k < s.source.size(); ++k) {
    s.feedback[k] = Mat<cplx>(F, M);
    kern::residual(y.data(), s.mix.data(), s.source[k].data(), s.feedback[k].data(), F * M);
  }
  return s;
}

void check_inputs(const OnsetMatrix& y, const PhaseParams& p) {
  require(y.rows() > 0 && y.cols() > 0, "onset matrix is empty");
  p.validate(y.rows(), y.cols());
  require(all_finite(y.data(), y.size()), "non-finite onset matrix");
}

}  // namespace

Synthesis synthesize_strict(const OnsetMatrix& y, const PhaseParams& p) {
  check_inputs(y, p);
  std::vector<Mat<cplx>> sources;
  sources.reserve(p.sources());
  for (std::size_t k = 0; k < p.sources(); ++k)
    sources.push_back(strict_source(p.mag[k], p.ref_phase[k], p.delay[k]));
  return assemble(y, std::move(sources));
}

Synthesis synthesize_relaxed(const OnsetMatrix& y, const PhaseParams& p) {
  check_inputs(y, p);
  std::vector<Mat<cplx>> sources;
  sources.reserve(p.sources());
  for (std::size_t k = 0; k < p.sources(); ++k)
    sources.push_back(relaxed_source(p.mag[k], p.onset_phase[k]));
  return assemble(y, std::move(sources));
}

double strict_cost(const OnsetMatrix& y, const PhaseParams& p) {
  const Synthesis s = synthesize_strict(y, p);
  return kern::dist_sq(y.data(), s.mix.data(), y.size());
}

double relaxed_cost(const OnsetMatrix& y, const PhaseParams& p, double sigma) {
  require(sigma >= 0.0, "sigma must be nonnegative");
  const Synthesis s = synthesize_relaxed(y, p);
  double cost = kern::dist_sq(y.data(), s.mix.data(), y.size());
  const std::size_t F = y.rows(), M = y.cols();
  std::vector<cplx> u(F), r(F), v(F);
  std::vector<double> a2(F);
  for (std::size_t k = 0; k < p.sources(); ++k) {
    kern::unit_phasor(p.ref_phase[k].data(), u.data(), F);
    for (std::size_t m = 0; m < M; ++m) {
      kern::unit_ramp(p.delay[k][m], r.data(), F);
      kern::unit_phasor(p.onset_phase[k].col(m), v.data(), F);
      const double* a = p.mag[k].col(m);
      for (std::size_t f = 0; f < F; ++f) a2[f] = a[f] * a[f];
      cost += sigma * kern::pull_penalty(a2.data(), v.data(), u.data(), r.data(), F);
    }
  }
  return cost;
}

PhaseParams default_init(const OnsetMatrix& y, std::vector<Mat<double>> mags) {
  const std::size_t F = y.rows(), M = y.cols();
  const std::size_t K = mags.size();
  PhaseParams p;
  p.mag = std::move(mags);
  p.ref_phase.assign(K, std::vector<double>(F, 0.0));
  p.delay.assign(K, std::vector<double>(M, 0.0));
  p.onset_phase.assign(K, Mat<double>(F, M));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t f = 0; f < F; ++f)
      p.ref_phase[k][f] = wrap_phase(std::arg(y(f, 0)));
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t f = 0; f < F; ++f)
        p.onset_phase[k](f, m) = wrap_phase(std::arg(y(f, m)));
  }
  p.validate(F, M);
  return p;
}

PhaseParams random_init(const OnsetMatrix& y, std::vector<Mat<double>> mags, std::uint64_t seed) {
  const std::size_t F = y.rows(), M = y.cols();
  const std::size_t K = mags.size();
  Rng rng(seed);
  PhaseParams p;
  p.mag = std::move(mags);
  p.ref_phase.assign(K, std::vector<double>(F, 0.0));
  p.delay.assign(K, std::vector<double>(M, 0.0));
  p.onset_phase.assign(K, Mat<double>(F, M));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t f = 0; f < F; ++f) p.ref_phase[k][f] = rng.angle();
    for (std::size_t m = 1; m < M; ++m) p.delay[k][m] = rng.angle();
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t f = 0; f < F; ++f) p.onset_phase[k](f, m) = rng.angle();
  }
  p.validate(F, M);
  return p;
}

}  // namespace phaserep
