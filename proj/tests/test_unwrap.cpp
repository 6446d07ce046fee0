#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "phaserep/common.hpp"
#include "phaserep/metrics.hpp"
#include "phaserep/stft.hpp"
#include "phaserep/synth.hpp"
#include "phaserep/unwrap.hpp"

using namespace phaserep;

namespace {

StftConfig small_cfg() {
  StftConfig cfg;
  cfg.window = 16;
  cfg.hop = 4;
  cfg.bins = 16;
  cfg.sample_rate = 1000.0;
  return cfg;
}

Mat<double> constant_track(const std::vector<double>& col, std::size_t frames) {
  Mat<double> track(col.size(), frames);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < col.size(); ++f) track(f, t) = col[f];
  return track;
}

}  // namespace

TEST_CASE("instantaneous_freqs refines an isolated peak by the log-magnitude quadratic") {
  constexpr std::size_t F = 64;
  std::vector<double> col(F, 0.0);
  col[9] = 0.6;
  col[10] = 1.0;
  col[11] = 0.3;

  const double lm1 = std::log(0.6), l0 = std::log(1.0), lp1 = std::log(0.3);
  const double delta = 0.5 * (lm1 - lp1) / (lm1 - 2.0 * l0 + lp1);
  const double expect = (10.0 + delta) / double(F);

  const std::vector<double> freq = instantaneous_freqs(col.data(), F);
  REQUIRE(freq.size() == F);
  // One peak governs the whole lower half.
  for (std::size_t f = 0; f <= F / 2; ++f) CHECK(freq[f] == doctest::Approx(expect).epsilon(1e-12));
  // Upper bins advance opposite to their mirror image.
  for (std::size_t f = F / 2 + 1; f < F; ++f) CHECK(freq[f] == doctest::Approx(-freq[F - f]).epsilon(1e-12));
}

TEST_CASE("instantaneous_freqs assigns bins to the nearest peak, ties to the lower") {
  constexpr std::size_t F = 64;
  std::vector<double> col(F, 0.0);
  col[8] = 1.0;   // isolated: zero neighbors, no refinement
  col[16] = 2.0;

  const std::vector<double> freq = instantaneous_freqs(col.data(), F);
  for (std::size_t f = 0; f <= F / 2; ++f) {
    const std::size_t d8 = f > 8 ? f - 8 : 8 - f;
    const std::size_t d16 = f > 16 ? f - 16 : 16 - f;
    const double expect = (d8 <= d16 ? 8.0 : 16.0) / double(F);
    CHECK(freq[f] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("instantaneous_freqs falls back to bin centers on a silent column") {
  constexpr std::size_t F = 16;
  std::vector<double> col(F, 0.0);
  const std::vector<double> freq = instantaneous_freqs(col.data(), F);
  for (std::size_t f = 0; f <= F / 2; ++f) CHECK(freq[f] == double(f) / double(F));
  for (std::size_t f = F / 2 + 1; f < F; ++f) CHECK(freq[f] == -double(F - f) / double(F));
  CHECK_THROWS_AS(instantaneous_freqs(col.data(), 0), std::invalid_argument);
}

TEST_CASE("unwrap_phases keeps onset columns bit-exact") {
  const StftConfig cfg = small_cfg();
  constexpr std::size_t F = 16, T = 12;
  Rng rng(700);
  Mat<double> track(F, T);
  for (std::size_t i = 0; i < track.size(); ++i) track.data()[i] = rng.uniform(0.1, 2.0);
  Mat<double> onset(F, 2);
  for (std::size_t i = 0; i < onset.size(); ++i) onset.data()[i] = rng.angle();
  const std::vector<std::size_t> frames = {2, 7};

  const Mat<double> phases = unwrap_phases(track, onset, frames, cfg);
  REQUIRE(phases.rows() == F);
  REQUIRE(phases.cols() == T);
  for (std::size_t f = 0; f < F; ++f) {
    CHECK(phases(f, 2) == onset(f, 0));
    CHECK(phases(f, 7) == onset(f, 1));
  }
}

TEST_CASE("a symmetric exact-bin peak advances by 2*pi*f0*hop/bins per frame") {
  const StftConfig cfg = small_cfg();
  constexpr std::size_t F = 16, T = 10, f0 = 3;
  std::vector<double> col(F, 0.0);
  col[f0 - 1] = 0.5;
  col[f0] = 1.0;
  col[f0 + 1] = 0.5;  // symmetric neighbors: refinement offset is exactly zero
  const Mat<double> track = constant_track(col, T);
  Mat<double> onset(F, 1);
  for (std::size_t f = 0; f < F; ++f) onset(f, 0) = 0.25;

  const Mat<double> phases = unwrap_phases(track, onset, {0}, cfg);
  const double step = kTwoPi * double(f0) * double(cfg.hop) / double(F);
  for (std::size_t t = 0; t + 1 < T; ++t) {
    const double inc = wrap_phase(phases(f0, t + 1) - phases(f0, t));
    CHECK(inc == doctest::Approx(wrap_phase(step)).epsilon(1e-12));
  }
}

TEST_CASE("steady exact-bin sinusoid phases are reproduced from one onset") {
  StftConfig cfg;
  cfg.window = 64;
  cfg.hop = 16;
  cfg.bins = 64;
  cfg.sample_rate = 8000.0;
  constexpr std::size_t f0 = 7;
  std::vector<double> x(64 + 16 * 30);
  for (std::size_t n = 0; n < x.size(); ++n)
    x[n] = std::sin(kTwoPi * double(f0) / 64.0 * double(n));

  const Spectrogram sg = stft(x, cfg);
  REQUIRE(sg.x.cols() > 21);
  Mat<double> mag(64, sg.x.cols());
  Mat<double> truth(64, sg.x.cols());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag.data()[i] = std::abs(sg.x.data()[i]);
    truth.data()[i] = std::arg(sg.x.data()[i]);
  }
  Mat<double> onset(64, 1);
  for (std::size_t f = 0; f < 64; ++f) onset(f, 0) = truth(f, 0);

  const Mat<double> phases = unwrap_phases(mag, onset, {0}, cfg);
  for (std::size_t t = 1; t <= 20; ++t)
    for (std::size_t f = f0 - 1; f <= f0 + 1; ++f)
      CHECK(std::fabs(wrap_phase(phases(f, t) - truth(f, t))) <= 1e-2);
}

TEST_CASE("silent bins come out as exact zeros") {
  const StftConfig cfg = small_cfg();
  constexpr std::size_t F = 16, T = 8;
  Rng rng(701);
  Mat<double> track(F, T);
  for (std::size_t i = 0; i < track.size(); ++i) track.data()[i] = rng.uniform(0.1, 1.0);
  for (std::size_t f = 0; f < F; ++f) track(f, 5) = 0.0;  // one silent column
  track(3, 2) = 0.0;                                      // and one silent bin
  Mat<double> onset(F, 1);
  for (std::size_t f = 0; f < F; ++f) onset(f, 0) = rng.angle();

  const Spectrogram out = unwrap_source(track, onset, {0}, cfg);
  for (std::size_t f = 0; f < F; ++f) {
    CHECK(out.x(f, 5) == cplx{});
    CHECK(std::abs(out.x(f, 2)) == (f == 3 ? 0.0 : doctest::Approx(track(f, 2)).epsilon(1e-13)));
  }
}

TEST_CASE("unwrap_source keeps the magnitude track and the onset phases") {
  const StftConfig cfg = small_cfg();
  constexpr std::size_t F = 16, T = 9;
  Rng rng(702);
  Mat<double> track(F, T);
  for (std::size_t i = 0; i < track.size(); ++i) track.data()[i] = rng.uniform(0.05, 3.0);
  Mat<double> onset(F, 2);
  for (std::size_t i = 0; i < onset.size(); ++i) onset.data()[i] = rng.angle();
  const std::vector<std::size_t> frames = {1, 6};

  const Spectrogram out = unwrap_source(track, onset, frames, cfg);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f)
      CHECK(std::abs(out.x(f, t)) == doctest::Approx(track(f, t)).epsilon(1e-13));
  for (std::size_t f = 0; f < F; ++f) {
    CHECK(std::fabs(wrap_phase(std::arg(out.x(f, 1)) - onset(f, 0))) < 1e-12);
    CHECK(std::fabs(wrap_phase(std::arg(out.x(f, 6)) - onset(f, 1))) < 1e-12);
  }
}

TEST_CASE("unwrap_phases validates its inputs") {
  const StftConfig cfg = small_cfg();
  const Mat<double> track(16, 8);
  const Mat<double> onset(16, 2);
  CHECK_THROWS_AS(unwrap_phases(track, onset, {1}, cfg), std::invalid_argument);       // count
  CHECK_THROWS_AS(unwrap_phases(track, onset, {1, 9}, cfg), std::invalid_argument);    // range
  CHECK_THROWS_AS(unwrap_phases(track, onset, {5, 5}, cfg), std::invalid_argument);    // order
  CHECK_THROWS_AS(unwrap_phases(track, onset, {}, cfg), std::invalid_argument);        // empty
  CHECK_THROWS_AS(unwrap_phases(Mat<double>(8, 8), onset, {1, 3}, cfg), std::invalid_argument);
  const Mat<double> bad(8, 2);
  CHECK_THROWS_AS(unwrap_phases(track, bad, {1, 3}, cfg), std::invalid_argument);      // rows
}

TEST_CASE("oracle-phase resynthesis of a scene source clears 10 dB SDR") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Scene scene = make_scene(SceneKind::disjoint, seed);
    const std::vector<double>& ref = scene.sources[0];

    const Spectrogram sg = stft(ref, scene.cfg);
    Mat<double> mag(sg.x.rows(), sg.x.cols());
    for (std::size_t i = 0; i < mag.size(); ++i) mag.data()[i] = std::abs(sg.x.data()[i]);

    std::vector<std::size_t> frames;
    for (const SceneNote& note : scene.notes)
      if (note.source == 0) frames.push_back(scene.onset_frames[note.onset_index]);
    std::sort(frames.begin(), frames.end());
    REQUIRE(!frames.empty());

    Mat<double> onset(mag.rows(), frames.size());
    for (std::size_t m = 0; m < frames.size(); ++m)
      for (std::size_t f = 0; f < mag.rows(); ++f)
        onset(f, m) = std::arg(sg.x(f, frames[m]));

    const Spectrogram est = unwrap_source(mag, onset, frames, scene.cfg);
    std::vector<double> y = istft(est);
    y.resize(ref.size(), 0.0);
    const Scores s = bss_scores(y, {ref}, 0);
    CHECK(s.sdr > 10.0);
  }
}
