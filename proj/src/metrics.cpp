#include "phaserep/metrics.hpp"

#include <cmath>
#include <cstddef>

#include "phaserep/common.hpp"
#include "phaserep/kernels.hpp"

namespace phaserep {
namespace {

constexpr double kDbCap = 200.0;
constexpr double kRidge = 1e-9;  // relative Tikhonov weight for the Gram solve

// 10 log10(num/den) with the +-200 dB clamp; a zero numerator floors, a zero
// denominator (perfect component) caps.
double ratio_db(double num, double den) {
  if (num <= 0.0) return -kDbCap;
  if (den <= 0.0) return kDbCap;
  const double db = 10.0 * std::log10(num / den);
  if (db > kDbCap) return kDbCap;
  if (db < -kDbCap) return -kDbCap;
  return db;
}

// Solve A c = b in place, Gaussian elimination with partial pivoting.
// A is n x n column-major.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b,
                                 std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[col * n + r]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    require(best > 0.0, "bss_scores: reference subspace is degenerate");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[c * n + col], a[c * n + pivot]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[col * n + r] * inv;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[c * n + r] -= factor * a[c * n + col];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> c(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[j * n + i] * c[j];
    c[i] = acc / a[i * n + i];
  }
  return c;
}

// <r_i delayed by la, r_j delayed by lb> over their overlap; delayed samples
// before the signal start are zero.
double delayed_dot(const double* ri, std::size_t la, const double* rj, std::size_t lb,
                   std::size_t n) {
  if (la < lb) {
    std::swap(ri, rj);
    std::swap(la, lb);
  }
  return kern::dot(ri, rj + (la - lb), n - la);
}

// Least-squares coefficients for representing e in span{refs[i] delayed by
// 0..taps-1}, ridge-stabilized; then the reconstruction itself.
std::vector<double> project_span(const std::vector<const double*>& refs, std::size_t n,
                                 const double* e, std::size_t taps,
                                 std::vector<double>* recon) {
  const std::size_t k = refs.size();
  const std::size_t dim = k * taps;
  std::vector<double> gram(dim * dim);
  std::vector<double> rhs(dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t la = 0; la < taps; ++la) {
      const std::size_t row = i * taps + la;
      for (std::size_t j = i; j < k; ++j)
        for (std::size_t lb = (j == i ? la : 0); lb < taps; ++lb) {
          const std::size_t col = j * taps + lb;
          const double v = delayed_dot(refs[i], la, refs[j], lb, n);
          gram[col * dim + row] = v;
          gram[row * dim + col] = v;
        }
      rhs[row] = kern::dot(refs[i], e + la, n - la);
    }

  double trace = 0.0;
  for (std::size_t d = 0; d < dim; ++d) trace += gram[d * dim + d];
  require(trace > 0.0, "bss_scores: all references are zero");
  const double eps = kRidge * trace / static_cast<double>(dim);
  for (std::size_t d = 0; d < dim; ++d) gram[d * dim + d] += eps;

  std::vector<double> coef = solve_linear(std::move(gram), std::move(rhs), dim);
  recon->assign(n, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t la = 0; la < taps; ++la) {
      const double c = coef[i * taps + la];
      if (c == 0.0) continue;
      double* dst = recon->data() + la;
      const double* src = refs[i];
      for (std::size_t t = 0; t + la < n; ++t) dst[t] += c * src[t];
    }
  return coef;
}

}  // namespace

double onset_estimation_error(const std::vector<OnsetMatrix>& truth,
                              const std::vector<OnsetMatrix>& estimate) {
  require(!truth.empty(), "onset_estimation_error: no sources");
  require(truth.size() == estimate.size(), "onset_estimation_error: source count mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    require(truth[k].same_shape(estimate[k]), "onset_estimation_error: shape mismatch");
    total += std::sqrt(kern::dist_sq(truth[k].data(), estimate[k].data(), truth[k].size()));
  }
  return total / static_cast<double>(truth.size());
}

Scores bss_scores(const std::vector<double>& estimate,
                  const std::vector<std::vector<double>>& references, std::size_t index,
                  std::size_t taps) {
  const std::size_t n = estimate.size();
  const std::size_t k = references.size();
  require(k > 0, "bss_scores: no references");
  require(index < k, "bss_scores: source index out of range");
  require(taps > 0 && n > taps, "bss_scores: signal shorter than the projection filter");
  for (const auto& r : references)
    require(r.size() == n, "bss_scores: reference length mismatch");
  require(kern::dot(references[index].data(), references[index].data(), n) > 0.0,
          "bss_scores: reference signal is all zero");

  if (estimate == references[index]) return {kDbCap, kDbCap, kDbCap};

  std::vector<const double*> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = references[i].data();

  std::vector<double> span, target;
  project_span(all, n, estimate.data(), taps, &span);
  project_span({references[index].data()}, n, estimate.data(), taps, &target);

  double target_sq = 0.0, dist_sq = 0.0, interf_sq = 0.0, span_sq = 0.0, artif_sq = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double e = estimate[t];
    target_sq += target[t] * target[t];
    dist_sq += (e - target[t]) * (e - target[t]);
    interf_sq += (span[t] - target[t]) * (span[t] - target[t]);
    span_sq += span[t] * span[t];
    artif_sq += (e - span[t]) * (e - span[t]);
  }

  Scores out;
  out.sdr = ratio_db(target_sq, dist_sq);
  out.sir = ratio_db(target_sq, interf_sq);
  out.sar = ratio_db(span_sq, artif_sq);
  return out;
}

std::vector<Scores> bss_scores_all(const std::vector<std::vector<double>>& estimates,
                                   const std::vector<std::vector<double>>& references,
                                   std::size_t taps) {
  require(estimates.size() == references.size(), "bss_scores_all: count mismatch");
  std::vector<Scores> out(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i)
    out[i] = bss_scores(estimates[i], references, i, taps);
  return out;
}

}  // namespace phaserep
