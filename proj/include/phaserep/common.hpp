#ifndef PHASEREP_COMMON_HPP
#define PHASEREP_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phaserep {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap an angle to (-pi, pi].
inline double wrap_phase(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Column-major matrix; columns are the contiguous unit the kernels operate on.
template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols, T fill = T())
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return v_[c * rows_ + r]; }
  const T& operator()(std::size_t r, std::size_t c) const { return v_[c * rows_ + r]; }

  T* col(std::size_t c) { return v_.data() + c * rows_; }
  const T* col(std::size_t c) const { return v_.data() + c * rows_; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> v_;
};

// xoshiro-free minimal RNG: splitmix64 seeded mt19937_64 with explicit
// mappings so that every stream is reproducible bit-for-bit on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64; plenty for test/dataset generation
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform in (-pi, pi]
  double angle() { return wrap_phase(uniform(-kPi, kPi)); }

  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  double gaussian() {
    // Box-Muller; prefers determinism over the last digit of statistical polish
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t s_;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace phaserep

#endif  // PHASEREP_COMMON_HPP
