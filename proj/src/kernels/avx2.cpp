#include "phaserep/kernels.hpp"

// AVX2+FMA kernel variants. Complex data is interleaved (re,im) doubles, two
// complex values per __m256d. Every loop handles the tail with the scalar
// pattern so arbitrary lengths are fine. Reductions use vector accumulators
// and therefore round differently from the scalar reference; the equivalence
// tests pin the allowed divergence.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace phaserep::kern {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// [a0*b0 - a0i*b0i, a0i*b0 + a0*b0i, ...] : two complex products
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d br = _mm256_movedup_pd(b);         // [br0,br0,br1,br1]
  __m256d bi = _mm256_permute_pd(b, 0xF);    // [bi0,bi0,bi1,bi1]
  __m256d sw = _mm256_permute_pd(a, 0x5);    // [ai0,ar0,ai1,ar1]
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(sw, bi));
}

// two products a * conj(b)
inline __m256d cmul_conjb(__m256d a, __m256d b) {
  __m256d br = _mm256_movedup_pd(b);
  __m256d bi = _mm256_permute_pd(b, 0xF);
  __m256d sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmsubadd_pd(a, br, _mm256_mul_pd(sw, bi));
}

// [a0,a1] -> [a0,a0,a1,a1]; pairs a real factor with interleaved complex lanes
inline __m256d dup_pair(const double* a) {
  __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(a));
  return _mm256_permute4x64_pd(v, 0x50);
}

// ---------------------------------------------------------------------------
// vector sin/cos
// ---------------------------------------------------------------------------
// Cody-Waite reduction by pi/2 plus the usual minimax kernels on
// [-pi/4, pi/4]. Good to a few ulp for |x| up to ~1e6; the phases handled
// here stay below ~2e4 rad. Quadrant logic works on two's complement bits,
// so negative arguments fall out naturally.

const double kInvPio2 = 6.36619772367581382433e-01;
const double kPio2Hi = 1.57079632673412561417e+00;
const double kPio2Lo = 6.07710050650619224932e-11;

const double kS1 = -1.66666666666666324348e-01;
const double kS2 = 8.33333333332248946124e-03;
const double kS3 = -1.98412698298579493134e-04;
const double kS4 = 2.75573137070700676789e-06;
const double kS5 = -2.50507602534068634195e-08;
const double kS6 = 1.58969099521155010221e-10;

const double kC1 = 4.16666666666666019037e-02;
const double kC2 = -1.38888888888741095749e-03;
const double kC3 = 2.48015872894767294178e-05;
const double kC4 = -2.75573143513906633035e-07;
const double kC5 = 2.08757232129817482790e-09;
const double kC6 = -1.13596475577881948265e-11;

inline __m256d widen_mask(__m128i nonzero32) {
  __m128i m = _mm_cmpgt_epi32(nonzero32, _mm_setzero_si128());
  return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(m));
}

inline void sincos4(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256d fn = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kInvPio2)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(fn, _mm256_set1_pd(kPio2Lo), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(kS6);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS5));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS4));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS3));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS2));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kS1));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_set1_pd(kC6);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC5));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC4));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC3));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC2));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kC1));
  const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                        _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

  const __m128i n = _mm256_cvtpd_epi32(fn);
  const __m256d swap_m = widen_mask(_mm_and_si128(n, _mm_set1_epi32(1)));
  const __m256d sflip = widen_mask(_mm_and_si128(n, _mm_set1_epi32(2)));
  const __m256d cflip = widen_mask(_mm_and_si128(_mm_add_epi32(n, _mm_set1_epi32(1)), _mm_set1_epi32(2)));

  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap_m);
  __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap_m);
  *s_out = _mm256_xor_pd(s, _mm256_and_pd(sflip, sign));
  *c_out = _mm256_xor_pd(c, _mm256_and_pd(cflip, sign));
}

// interleave 4 cos/sin lanes into 4 complex values at out
inline void store_phasors(cplx* out, __m256d c, __m256d s) {
  __m256d lo = _mm256_unpacklo_pd(c, s);  // [c0,s0 | c2,s2]
  __m256d hi = _mm256_unpackhi_pd(c, s);  // [c1,s1 | c3,s3]
  _mm256_storeu_pd(dp(out), _mm256_permute2f128_pd(lo, hi, 0x20));
  _mm256_storeu_pd(dp(out) + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
}

// ---------------------------------------------------------------------------
// real kernels
// ---------------------------------------------------------------------------

double a_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void a_vmul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void a_acc_mul(double* acc, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                              _mm256_loadu_pd(acc + i)));
  for (; i < n; ++i) acc[i] += a[i] * b[i];
}

void a_acc_sq(double* acc, const double* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(v, v, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] += a[i] * a[i];
}

double a_hwr_diff_sum(const double* cur, const double* prev, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(cur + i), _mm256_loadu_pd(prev + i));
    acc = _mm256_add_pd(acc, _mm256_max_pd(d, zero));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = cur[i] - prev[i];
    if (d > 0.0) s += d;
  }
  return s;
}

// ---------------------------------------------------------------------------
// complex elementwise kernels
// ---------------------------------------------------------------------------

void a_cabs(const cplx* x, double* out, std::size_t n) {
  const double* p = dp(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(p + 2 * i);
    __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    // hadd interleaves 128-bit lanes: [m0,m2,m1,m3] -> [m0,m1,m2,m3]
    h = _mm256_permute4x64_pd(h, 0xD8);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(h));
  }
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    out[i] = std::sqrt(re * re + im * im);
  }
}

void a_cadd(cplx* acc, const cplx* x, std::size_t n) {
  double* pa = dp(acc);
  const double* px = dp(x);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4)
    _mm256_storeu_pd(pa + i, _mm256_add_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(px + i)));
  for (; i < m; ++i) pa[i] += px[i];
}

void a_residual(const cplx* y, const cplx* total, const cplx* self, cplx* out, std::size_t n) {
  const double* py = dp(y);
  const double* pt = dp(total);
  const double* ps = dp(self);
  double* po = dp(out);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(py + i), _mm256_loadu_pd(pt + i));
    _mm256_storeu_pd(po + i, _mm256_add_pd(v, _mm256_loadu_pd(ps + i)));
  }
  for (; i < m; ++i) po[i] = py[i] - pt[i] + ps[i];
}

void a_real_cmul(const double* a, const cplx* v, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(dp(out + i), _mm256_mul_pd(dup_pair(a + i), _mm256_loadu_pd(dp(v + i))));
  for (; i < n; ++i) out[i] = a[i] * v[i];
}

void a_real_cmul2(const double* a, const cplx* u, const cplx* r, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d prod = cmul(_mm256_loadu_pd(dp(u + i)), _mm256_loadu_pd(dp(r + i)));
    _mm256_storeu_pd(dp(out + i), _mm256_mul_pd(dup_pair(a + i), prod));
  }
  for (; i < n; ++i) out[i] = a[i] * (u[i] * r[i]);
}

void a_real_cmul_conj(const double* a, const cplx* v, const cplx* u, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d prod = cmul_conjb(_mm256_loadu_pd(dp(v + i)), _mm256_loadu_pd(dp(u + i)));
    _mm256_storeu_pd(dp(out + i), _mm256_mul_pd(dup_pair(a + i), prod));
  }
  for (; i < n; ++i) out[i] = a[i] * (v[i] * std::conj(u[i]));
}

void a_cmul_conj(const cplx* b, const cplx* u, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(dp(out + i),
                     cmul_conjb(_mm256_loadu_pd(dp(b + i)), _mm256_loadu_pd(dp(u + i))));
  for (; i < n; ++i) out[i] = b[i] * std::conj(u[i]);
}

void a_acc_rot_conj(cplx* acc, const cplx* b, const double* a, const cplx* r, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d prod = cmul_conjb(_mm256_loadu_pd(dp(b + i)), _mm256_loadu_pd(dp(r + i)));
    __m256d v = _mm256_fmadd_pd(dup_pair(a + i), prod, _mm256_loadu_pd(dp(acc + i)));
    _mm256_storeu_pd(dp(acc + i), v);
  }
  for (; i < n; ++i) acc[i] += a[i] * (b[i] * std::conj(r[i]));
}

void a_phase_pull(const cplx* b, const double* a, const double* a2, double sigma,
                  const cplx* u, const cplx* r, cplx* out, std::size_t n) {
  const __m256d sig = _mm256_set1_pd(sigma);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d prior = cmul(_mm256_loadu_pd(dp(u + i)), _mm256_loadu_pd(dp(r + i)));
    prior = _mm256_mul_pd(prior, _mm256_mul_pd(sig, dup_pair(a2 + i)));
    __m256d v = _mm256_fmadd_pd(dup_pair(a + i), _mm256_loadu_pd(dp(b + i)), prior);
    _mm256_storeu_pd(dp(out + i), v);
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] + (sigma * a2[i]) * (u[i] * r[i]);
}

void a_mask_apply(const cplx* x, const double* w, const double* denom, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m128d wp = _mm_loadu_pd(w + i);
    __m128d dn = _mm_loadu_pd(denom + i);
    __m128d ratio = _mm_div_pd(wp, dn);
    __m256d ratio2 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(ratio), 0x50);
    __m256d zero2 = _mm256_permute4x64_pd(
        _mm256_castpd128_pd256(_mm_cmpeq_pd(dn, _mm_setzero_pd())), 0x50);
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(dp(x + i)), ratio2);
    _mm256_storeu_pd(dp(out + i), _mm256_andnot_pd(zero2, v));
  }
  for (; i < n; ++i)
    out[i] = denom[i] == 0.0 ? cplx(0.0, 0.0) : x[i] * (w[i] / denom[i]);
}

// ---------------------------------------------------------------------------
// phasor kernels
// ---------------------------------------------------------------------------

void a_unit_phasor(const double* theta, cplx* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s, c;
    sincos4(_mm256_loadu_pd(theta + i), &s, &c);
    store_phasors(out + i, c, s);
  }
  for (; i < n; ++i) out[i] = cplx(std::cos(theta[i]), std::sin(theta[i]));
}

void a_unit_ramp(double slope, cplx* out, std::size_t n) {
  const __m256d sl = _mm256_set1_pd(slope);
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s, c;
    sincos4(_mm256_mul_pd(sl, idx), &s, &c);
    store_phasors(out + i, c, s);
    idx = _mm256_add_pd(idx, four);
  }
  for (; i < n; ++i) {
    const double t = slope * static_cast<double>(i);
    out[i] = cplx(std::cos(t), std::sin(t));
  }
}

// ---------------------------------------------------------------------------
// reductions
// ---------------------------------------------------------------------------

cplx a_cdot_conj(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = _mm256_add_pd(acc, cmul_conjb(_mm256_loadu_pd(dp(b + i)), _mm256_loadu_pd(dp(a + i))));
  // cmul_conjb(b, a) = b * conj(a) = conj(a) * b, matching the contract
  double re = _mm256_cvtsd_f64(acc) + _mm_cvtsd_f64(_mm256_extractf128_pd(acc, 1));
  __m256d sh = _mm256_permute_pd(acc, 0x5);
  double im = _mm256_cvtsd_f64(sh) + _mm_cvtsd_f64(_mm256_extractf128_pd(sh, 1));
  for (; i < n; ++i) {
    const cplx t = std::conj(a[i]) * b[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double a_dist_sq(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = dp(a);
  const double* pb = dp(b);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < m; ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

double a_pull_penalty(const double* a2, const cplx* v, const cplx* u, const cplx* r, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(dp(v + i)),
                              cmul(_mm256_loadu_pd(dp(u + i)), _mm256_loadu_pd(dp(r + i))));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), dup_pair(a2 + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const cplx d = v[i] - u[i] * r[i];
    s += a2[i] * (d.real() * d.real() + d.imag() * d.imag());
  }
  return s;
}

constexpr KernelTable kAvx2Table = {
    "avx2",
    a_dot, a_vmul, a_acc_mul, a_acc_sq, a_hwr_diff_sum,
    a_cabs, a_cadd, a_residual, a_real_cmul, a_real_cmul2, a_real_cmul_conj,
    a_cmul_conj, a_acc_rot_conj, a_phase_pull, a_mask_apply,
    a_unit_phasor, a_unit_ramp,
    a_cdot_conj, a_dist_sq, a_pull_penalty,
};

}  // namespace

const KernelTable* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
  return nullptr;
}

}  // namespace phaserep::kern

#else  // non-x86 builds fall back to the scalar reference

namespace phaserep::kern {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace phaserep::kern

#endif
