#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "phaserep/common.hpp"
#include "phaserep/kernels.hpp"

using namespace phaserep;
using kern::KernelTable;

namespace {

// Sizes that straddle vector widths and their remainders.
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 257};

struct Data {
  std::vector<double> a, b, a2;
  std::vector<cplx> u, v, w, r;
  explicit Data(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    a.resize(n);
    b.resize(n);
    a2.resize(n);
    u.resize(n);
    v.resize(n);
    w.resize(n);
    r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.gaussian();
      b[i] = rng.gaussian();
      a2[i] = a[i] * a[i];
      u[i] = cplx(rng.gaussian(), rng.gaussian());
      v[i] = cplx(rng.gaussian(), rng.gaussian());
      w[i] = cplx(rng.gaussian(), rng.gaussian());
      r[i] = std::polar(1.0, rng.angle());
    }
  }
};

bool close(double x, double y, double tol) { return std::fabs(x - y) <= tol * (1.0 + std::fabs(y)); }
bool close(cplx x, cplx y, double tol) { return std::abs(x - y) <= tol * (1.0 + std::abs(y)); }

void check_arrays(const std::vector<cplx>& got, const std::vector<cplx>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CAPTURE(i);
    REQUIRE(close(got[i], want[i], tol));
  }
}

}  // namespace

TEST_CASE("scalar table matches naive formulas") {
  const KernelTable& t = kern::scalar_table();
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    Data d(n, 1000 + n);

    double dot_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot_ref += d.a[i] * d.b[i];
    CHECK(close(t.dot(d.a.data(), d.b.data(), n), dot_ref, 1e-15));

    std::vector<double> rr(n), rr2(n);
    t.vmul(d.a.data(), d.b.data(), rr.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rr[i] == d.a[i] * d.b[i]);

    rr.assign(n, 0.5);
    t.acc_mul(rr.data(), d.a.data(), d.b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rr[i] == 0.5 + d.a[i] * d.b[i]);

    rr.assign(n, 0.25);
    t.acc_sq(rr.data(), d.a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rr[i] == 0.25 + d.a[i] * d.a[i]);

    double hwr_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = d.a[i] - d.b[i];
      if (diff > 0.0) hwr_ref += diff;
    }
    CHECK(close(t.hwr_diff_sum(d.a.data(), d.b.data(), n), hwr_ref, 1e-15));

    t.cabs(d.u.data(), rr.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(rr[i], std::abs(d.u[i]), 1e-15));

    std::vector<cplx> cc(n, cplx(1.0, -2.0)), want(n);
    t.cadd(cc.data(), d.u.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(cc[i] == cplx(1.0, -2.0) + d.u[i]);

    t.residual(d.u.data(), d.v.data(), d.w.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(cc[i] == d.u[i] - d.v[i] + d.w[i]);

    t.real_cmul(d.a.data(), d.v.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(cc[i] == d.a[i] * d.v[i]);

    t.real_cmul2(d.a.data(), d.u.data(), d.r.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i) want[i] = d.a[i] * d.u[i] * d.r[i];
    check_arrays(cc, want, 1e-15);

    t.real_cmul_conj(d.a.data(), d.v.data(), d.u.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i) want[i] = d.a[i] * d.v[i] * std::conj(d.u[i]);
    check_arrays(cc, want, 1e-15);

    t.cmul_conj(d.v.data(), d.u.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i) want[i] = d.v[i] * std::conj(d.u[i]);
    check_arrays(cc, want, 1e-15);

    cc.assign(n, cplx(0.5, 0.5));
    t.acc_rot_conj(cc.data(), d.v.data(), d.a.data(), d.r.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      want[i] = cplx(0.5, 0.5) + d.v[i] * d.a[i] * std::conj(d.r[i]);
    check_arrays(cc, want, 1e-15);

    const double sigma = 0.37;
    t.phase_pull(d.v.data(), d.a.data(), d.a2.data(), sigma, d.u.data(), d.r.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      want[i] = d.v[i] * d.a[i] + sigma * d.a2[i] * d.u[i] * d.r[i];
    check_arrays(cc, want, 1e-15);

    std::vector<double> denom(n);
    for (std::size_t i = 0; i < n; ++i) denom[i] = (i % 3 == 0) ? 0.0 : d.a2[i] + 1e-3;
    t.mask_apply(d.v.data(), d.a2.data(), denom.data(), cc.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      want[i] = denom[i] == 0.0 ? cplx(0.0, 0.0) : d.v[i] * d.a2[i] / denom[i];
    check_arrays(cc, want, 1e-15);

    cplx cd_ref(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) cd_ref += std::conj(d.u[i]) * d.v[i];
    CHECK(close(t.cdot_conj(d.u.data(), d.v.data(), n), cd_ref, 1e-14));

    double ds_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) ds_ref += std::norm(d.u[i] - d.v[i]);
    CHECK(close(t.dist_sq(d.u.data(), d.v.data(), n), ds_ref, 1e-14));

    double pp_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) pp_ref += d.a2[i] * std::norm(d.v[i] - d.u[i] * d.r[i]);
    CHECK(close(t.pull_penalty(d.a2.data(), d.v.data(), d.u.data(), d.r.data(), n), pp_ref, 1e-14));
  }
}

TEST_CASE("unit phasors match the libm reference") {
  const KernelTable& t = kern::scalar_table();
  Rng rng(7);
  std::vector<double> theta(257);
  for (double& x : theta) x = rng.uniform(-40.0, 40.0);
  std::vector<cplx> out(theta.size());
  t.unit_phasor(theta.data(), out.data(), theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    CHECK(std::abs(out[i] - std::polar(1.0, theta[i])) < 4e-15);

  const double slope = -1.2345;
  t.unit_ramp(slope, out.data(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(std::abs(out[i] - std::polar(1.0, slope * static_cast<double>(i))) < 1e-12);
}

TEST_CASE("simd variant agrees with the scalar reference") {
  const KernelTable* simd = kern::avx2_table();
  if (simd == nullptr) return;  // host without the extension: nothing to compare
  const KernelTable& ref = kern::scalar_table();

  for (std::size_t n : kSizes) {
    CAPTURE(n);
    Data d(n, 9000 + n);
    const double tol = 1e-13;

    CHECK(close(simd->dot(d.a.data(), d.b.data(), n), ref.dot(d.a.data(), d.b.data(), n), tol));
    CHECK(close(simd->hwr_diff_sum(d.a.data(), d.b.data(), n),
                ref.hwr_diff_sum(d.a.data(), d.b.data(), n), tol));
    CHECK(close(simd->cdot_conj(d.u.data(), d.v.data(), n),
                ref.cdot_conj(d.u.data(), d.v.data(), n), tol));
    CHECK(close(simd->dist_sq(d.u.data(), d.v.data(), n),
                ref.dist_sq(d.u.data(), d.v.data(), n), tol));
    CHECK(close(simd->pull_penalty(d.a2.data(), d.v.data(), d.u.data(), d.r.data(), n),
                ref.pull_penalty(d.a2.data(), d.v.data(), d.u.data(), d.r.data(), n), tol));

    std::vector<double> r1(n), r2(n);
    simd->vmul(d.a.data(), d.b.data(), r1.data(), n);
    ref.vmul(d.a.data(), d.b.data(), r2.data(), n);
    CHECK(r1 == r2);

    // acc_mul/acc_sq may contract to FMA; compare to tolerance, not bitwise.
    r1.assign(n, 1.0);
    r2.assign(n, 1.0);
    simd->acc_mul(r1.data(), d.a.data(), d.b.data(), n);
    ref.acc_mul(r2.data(), d.a.data(), d.b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i], tol));

    r1.assign(n, 2.0);
    r2.assign(n, 2.0);
    simd->acc_sq(r1.data(), d.a.data(), n);
    ref.acc_sq(r2.data(), d.a.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i], tol));

    simd->cabs(d.u.data(), r1.data(), n);
    ref.cabs(d.u.data(), r2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(r1[i], r2[i], tol));

    std::vector<cplx> c1(n), c2(n);
    simd->residual(d.u.data(), d.v.data(), d.w.data(), c1.data(), n);
    ref.residual(d.u.data(), d.v.data(), d.w.data(), c2.data(), n);
    CHECK(c1 == c2);

    simd->real_cmul(d.a.data(), d.v.data(), c1.data(), n);
    ref.real_cmul(d.a.data(), d.v.data(), c2.data(), n);
    CHECK(c1 == c2);

    simd->real_cmul2(d.a.data(), d.u.data(), d.r.data(), c1.data(), n);
    ref.real_cmul2(d.a.data(), d.u.data(), d.r.data(), c2.data(), n);
    check_arrays(c1, c2, tol);

    simd->real_cmul_conj(d.a.data(), d.v.data(), d.u.data(), c1.data(), n);
    ref.real_cmul_conj(d.a.data(), d.v.data(), d.u.data(), c2.data(), n);
    check_arrays(c1, c2, tol);

    simd->cmul_conj(d.v.data(), d.u.data(), c1.data(), n);
    ref.cmul_conj(d.v.data(), d.u.data(), c2.data(), n);
    check_arrays(c1, c2, tol);

    c1.assign(n, cplx(0.1, -0.2));
    c2.assign(n, cplx(0.1, -0.2));
    simd->acc_rot_conj(c1.data(), d.v.data(), d.a.data(), d.r.data(), n);
    ref.acc_rot_conj(c2.data(), d.v.data(), d.a.data(), d.r.data(), n);
    check_arrays(c1, c2, tol);

    simd->phase_pull(d.v.data(), d.a.data(), d.a2.data(), 0.37, d.u.data(), d.r.data(), c1.data(), n);
    ref.phase_pull(d.v.data(), d.a.data(), d.a2.data(), 0.37, d.u.data(), d.r.data(), c2.data(), n);
    check_arrays(c1, c2, tol);

    std::vector<double> denom(n);
    for (std::size_t i = 0; i < n; ++i) denom[i] = (i % 5 == 0) ? 0.0 : 1.0 + d.a2[i];
    simd->mask_apply(d.v.data(), d.a2.data(), denom.data(), c1.data(), n);
    ref.mask_apply(d.v.data(), d.a2.data(), denom.data(), c2.data(), n);
    check_arrays(c1, c2, tol);
    for (std::size_t i = 0; i < n; i += 5) CHECK(c1[i] == cplx(0.0, 0.0));

    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = d.a[i] * 3.0;
    simd->unit_phasor(theta.data(), c1.data(), n);
    ref.unit_phasor(theta.data(), c2.data(), n);
    check_arrays(c1, c2, 1e-14);

    simd->unit_ramp(0.77, c1.data(), n);
    ref.unit_ramp(0.77, c2.data(), n);
    check_arrays(c1, c2, 1e-13);
  }
}

TEST_CASE("backend selection is explicit and reversible") {
  const kern::Backend before = kern::active_backend();
  REQUIRE(kern::set_backend(kern::Backend::scalar));
  CHECK(kern::active_backend() == kern::Backend::scalar);
  CHECK(std::string(kern::active().name) == "scalar");
  if (kern::avx2_table() != nullptr) {
    REQUIRE(kern::set_backend(kern::Backend::avx2));
    CHECK(kern::active_backend() == kern::Backend::avx2);
  } else {
    CHECK_FALSE(kern::set_backend(kern::Backend::avx2));
    CHECK(kern::active_backend() == kern::Backend::scalar);
  }
  kern::set_backend(before);
}
