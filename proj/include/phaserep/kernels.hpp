#ifndef PHASEREP_KERNELS_HPP
#define PHASEREP_KERNELS_HPP

#include <complex>
#include <cstddef>

// Low-level array kernels used by every numeric module. Each operation has a
// scalar reference implementation and may have SIMD variants; the active
// variant is chosen once at startup (CPU feature detection, overridable via
// the PHASEREP_KERNELS environment variable or set_backend()). Variants are
// equivalence-tested against the scalar reference, which is the semantic
// definition of each kernel.

namespace phaserep::kern {

using cplx = std::complex<double>;

enum class Backend { scalar = 0, avx2 = 1 };

// Table of kernel entry points for one backend.
struct KernelTable {
  const char* name;

  // real arrays
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*vmul)(const double* a, const double* b, double* out, std::size_t n);
  void (*acc_mul)(double* acc, const double* a, const double* b, std::size_t n);
  void (*acc_sq)(double* acc, const double* a, std::size_t n);
  double (*hwr_diff_sum)(const double* cur, const double* prev, std::size_t n);

  // complex elementwise
  void (*cabs)(const cplx* x, double* out, std::size_t n);
  void (*cadd)(cplx* acc, const cplx* x, std::size_t n);
  // out = y - total + self   (leave-one-out residual)
  void (*residual)(const cplx* y, const cplx* total, const cplx* self, cplx* out, std::size_t n);
  void (*real_cmul)(const double* a, const cplx* v, cplx* out, std::size_t n);
  void (*real_cmul2)(const double* a, const cplx* u, const cplx* r, cplx* out, std::size_t n);
  // out = a .* v .* conj(u)
  void (*real_cmul_conj)(const double* a, const cplx* v, const cplx* u, cplx* out, std::size_t n);
  void (*cmul_conj)(const cplx* b, const cplx* u, cplx* out, std::size_t n);
  // acc += b .* a .* conj(r)
  void (*acc_rot_conj)(cplx* acc, const cplx* b, const double* a, const cplx* r, std::size_t n);
  // out = b .* a + sigma * a2 .* u .* r
  void (*phase_pull)(const cplx* b, const double* a, const double* a2, double sigma,
                     const cplx* u, const cplx* r, cplx* out, std::size_t n);
  // out = x .* w ./ denom, 0 where denom == 0
  void (*mask_apply)(const cplx* x, const double* w, const double* denom, cplx* out, std::size_t n);

  // phasors
  void (*unit_phasor)(const double* theta, cplx* out, std::size_t n);
  void (*unit_ramp)(double slope, cplx* out, std::size_t n);  // out[k] = exp(i*slope*k)

  // reductions
  cplx (*cdot_conj)(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a).*b
  double (*dist_sq)(const cplx* a, const cplx* b, std::size_t n);  // sum |a-b|^2
  // sum a2 .* |v - u .* r|^2
  double (*pull_penalty)(const double* a2, const cplx* v, const cplx* u, const cplx* r, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();   // nullptr when unsupported (wrong arch or missing CPU features)

// Active backend. Default: best available, unless PHASEREP_KERNELS=scalar|avx2
// requests one explicitly. set_backend returns false (and changes nothing) if
// the requested backend is unavailable.
const KernelTable& active();
bool set_backend(Backend b);
Backend active_backend();

// Convenience forwarders through the active table.
inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void vmul(const double* a, const double* b, double* out, std::size_t n) { active().vmul(a, b, out, n); }
inline void acc_mul(double* acc, const double* a, const double* b, std::size_t n) { active().acc_mul(acc, a, b, n); }
inline void acc_sq(double* acc, const double* a, std::size_t n) { active().acc_sq(acc, a, n); }
inline double hwr_diff_sum(const double* cur, const double* prev, std::size_t n) { return active().hwr_diff_sum(cur, prev, n); }
inline void cabs(const cplx* x, double* out, std::size_t n) { active().cabs(x, out, n); }
inline void cadd(cplx* acc, const cplx* x, std::size_t n) { active().cadd(acc, x, n); }
inline void residual(const cplx* y, const cplx* total, const cplx* self, cplx* out, std::size_t n) { active().residual(y, total, self, out, n); }
inline void real_cmul(const double* a, const cplx* v, cplx* out, std::size_t n) { active().real_cmul(a, v, out, n); }
inline void real_cmul2(const double* a, const cplx* u, const cplx* r, cplx* out, std::size_t n) { active().real_cmul2(a, u, r, out, n); }
inline void real_cmul_conj(const double* a, const cplx* v, const cplx* u, cplx* out, std::size_t n) { active().real_cmul_conj(a, v, u, out, n); }
inline void cmul_conj(const cplx* b, const cplx* u, cplx* out, std::size_t n) { active().cmul_conj(b, u, out, n); }
inline void acc_rot_conj(cplx* acc, const cplx* b, const double* a, const cplx* r, std::size_t n) { active().acc_rot_conj(acc, b, a, r, n); }
inline void phase_pull(const cplx* b, const double* a, const double* a2, double sigma,
                       const cplx* u, const cplx* r, cplx* out, std::size_t n) { active().phase_pull(b, a, a2, sigma, u, r, out, n); }
inline void mask_apply(const cplx* x, const double* w, const double* denom, cplx* out, std::size_t n) { active().mask_apply(x, w, denom, out, n); }
inline void unit_phasor(const double* theta, cplx* out, std::size_t n) { active().unit_phasor(theta, out, n); }
inline void unit_ramp(double slope, cplx* out, std::size_t n) { active().unit_ramp(slope, out, n); }
inline cplx cdot_conj(const cplx* a, const cplx* b, std::size_t n) { return active().cdot_conj(a, b, n); }
inline double dist_sq(const cplx* a, const cplx* b, std::size_t n) { return active().dist_sq(a, b, n); }
inline double pull_penalty(const double* a2, const cplx* v, const cplx* u, const cplx* r, std::size_t n) { return active().pull_penalty(a2, v, u, r, n); }

}  // namespace phaserep::kern

#endif  // PHASEREP_KERNELS_HPP
