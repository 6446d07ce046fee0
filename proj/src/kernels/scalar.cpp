#include "phaserep/kernels.hpp"

#include <cmath>

// Scalar reference kernels. These are the definition of each operation; the
// SIMD variants must agree with them within the tolerances pinned in
// tests/test_kernels.cpp. Keep them boring: plain loops, no manual unrolling.

namespace phaserep::kern {
namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void s_vmul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_acc_mul(double* acc, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * b[i];
}

void s_acc_sq(double* acc, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * a[i];
}

double s_hwr_diff_sum(const double* cur, const double* prev, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = cur[i] - prev[i];
    if (d > 0.0) s += d;
  }
  return s;
}

void s_cabs(const cplx* x, double* out, std::size_t n) {
  // sqrt(re^2+im^2) without the hypot under/overflow dance: magnitudes here
  // are audio-scale, nowhere near the representable limits.
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    out[i] = std::sqrt(re * re + im * im);
  }
}

void s_cadd(cplx* acc, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void s_residual(const cplx* y, const cplx* total, const cplx* self, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] - total[i] + self[i];
}

void s_real_cmul(const double* a, const cplx* v, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * v[i];
}

void s_real_cmul2(const double* a, const cplx* u, const cplx* r, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * (u[i] * r[i]);
}

void s_real_cmul_conj(const double* a, const cplx* v, const cplx* u, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * (v[i] * std::conj(u[i]));
}

void s_cmul_conj(const cplx* b, const cplx* u, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = b[i] * std::conj(u[i]);
}

void s_acc_rot_conj(cplx* acc, const cplx* b, const double* a, const cplx* r, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * (b[i] * std::conj(r[i]));
}

void s_phase_pull(const cplx* b, const double* a, const double* a2, double sigma,
                  const cplx* u, const cplx* r, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i] * b[i] + (sigma * a2[i]) * (u[i] * r[i]);
}

void s_mask_apply(const cplx* x, const double* w, const double* denom, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = denom[i] == 0.0 ? cplx(0.0, 0.0) : x[i] * (w[i] / denom[i]);
}

void s_unit_phasor(const double* theta, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cplx(std::cos(theta[i]), std::sin(theta[i]));
}

void s_unit_ramp(double slope, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = slope * static_cast<double>(i);
    out[i] = cplx(std::cos(t), std::sin(t));
  }
}

cplx s_cdot_conj(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx t = std::conj(a[i]) * b[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double s_dist_sq(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() - b[i].real();
    const double im = a[i].imag() - b[i].imag();
    s += re * re + im * im;
  }
  return s;
}

double s_pull_penalty(const double* a2, const cplx* v, const cplx* u, const cplx* r, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx d = v[i] - u[i] * r[i];
    s += a2[i] * (d.real() * d.real() + d.imag() * d.imag());
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      "scalar",
      s_dot, s_vmul, s_acc_mul, s_acc_sq, s_hwr_diff_sum,
      s_cabs, s_cadd, s_residual, s_real_cmul, s_real_cmul2, s_real_cmul_conj,
      s_cmul_conj, s_acc_rot_conj, s_phase_pull, s_mask_apply,
      s_unit_phasor, s_unit_ramp,
      s_cdot_conj, s_dist_sq, s_pull_penalty,
  };
  return t;
}

}  // namespace phaserep::kern
