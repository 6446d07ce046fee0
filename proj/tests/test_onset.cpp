#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "phaserep/onset.hpp"
#include "phaserep/stft.hpp"

using namespace phaserep;

namespace {

// Spectrogram whose column magnitudes are dictated per frame so the flux
// sequence is known in closed form. Bin b of frame t carries mags[t][b] with
// an arbitrary fixed phase to make sure only |X| matters.
Spectrogram from_mags(const std::vector<std::vector<double>>& mags) {
  const std::size_t T = mags.size(), F = mags[0].size();
  Spectrogram sg;
  sg.x = Mat<cplx>(F, T);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f)
      sg.x(f, t) = std::polar(mags[t][f], 0.4 * double(f) - 0.9 * double(t));
  return sg;
}

// Single-bin spectrogram: frame t has magnitude seq[t] in bin 1 and zeros
// elsewhere, so flux[t] = max(0, seq[t] - seq[t-1]).
Spectrogram single_bin(const std::vector<double>& seq) {
  std::vector<std::vector<double>> mags(seq.size(), std::vector<double>(4, 0.0));
  for (std::size_t t = 0; t < seq.size(); ++t) mags[t][1] = seq[t];
  return from_mags(mags);
}

}  // namespace

TEST_CASE("spectral flux matches the rectified-difference oracle") {
  const std::vector<std::vector<double>> mags = {
      {1.0, 0.0, 2.0}, {0.5, 3.0, 2.0}, {0.5, 1.0, 5.0}, {0.0, 0.0, 0.0}};
  const Spectrogram sg = from_mags(mags);
  const std::vector<double> flux = spectral_flux(sg);
  REQUIRE(flux.size() == 4);

  for (std::size_t t = 0; t < 4; ++t) {
    double want = 0.0;
    for (std::size_t f = 0; f < 3; ++f) {
      const double prev = t == 0 ? 0.0 : mags[t - 1][f];
      want += std::max(0.0, mags[t][f] - prev);
    }
    CHECK(flux[t] == doctest::Approx(want).epsilon(1e-12));
  }
  // frame 0 is rectified against silence: full column energy
  CHECK(flux[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("flux scales linearly and detection is gain invariant") {
  const std::vector<double> seq = {0, 0, 5, 5, 0, 0, 3, 3, 0, 0};
  Spectrogram sg = single_bin(seq);
  const std::vector<double> base = spectral_flux(sg);

  Spectrogram scaled = sg;
  for (std::size_t i = 0; i < scaled.x.size(); ++i) scaled.x.data()[i] *= 37.5;
  const std::vector<double> big = spectral_flux(scaled);
  for (std::size_t t = 0; t < base.size(); ++t)
    CHECK(big[t] == doctest::Approx(37.5 * base[t]).epsilon(1e-12));

  CHECK(detect_onsets(sg) == detect_onsets(scaled));
}

TEST_CASE("detect_onsets finds flux peaks above the relative gate") {
  // flux = 0,0,5,0,0,0,3,0,0,0: peaks at frames 2 and 6, gap 4
  const Spectrogram sg = single_bin({0, 0, 5, 5, 0, 0, 3, 3, 0, 0});

  const std::vector<std::size_t> def = detect_onsets(sg);
  CHECK(def == std::vector<std::size_t>{2, 6});

  // raising the threshold above 3/5 drops the weaker peak
  OnsetConfig strict;
  strict.threshold = 0.7;
  CHECK(detect_onsets(sg, strict) == std::vector<std::size_t>{2});

  // threshold 0 keeps both; 1.0 keeps only the global maximum
  OnsetConfig loose;
  loose.threshold = 0.0;
  CHECK(detect_onsets(sg, loose) == std::vector<std::size_t>{2, 6});
  OnsetConfig top;
  top.threshold = 1.0;
  CHECK(detect_onsets(sg, top) == std::vector<std::size_t>{2});
}

TEST_CASE("min_gap suppression keeps the stronger of two close peaks") {
  // flux = 0,0,5,0,4,0,...: peaks at 2 (5) and 4 (4), distance 2
  const Spectrogram sg = single_bin({0, 0, 5, 5, 9, 9, 0, 0, 0, 0});
  // mags 0,0,5,5,9,9 -> flux 0,0,5,0,4,0

  OnsetConfig cfg;
  cfg.min_gap = 4;
  CHECK(detect_onsets(sg, cfg) == std::vector<std::size_t>{2});

  cfg.min_gap = 2;  // distance 2 is allowed at gap 2 (strictly-less blocks)
  CHECK(detect_onsets(sg, cfg) == std::vector<std::size_t>{2, 4});

  cfg.min_gap = 3;
  CHECK(detect_onsets(sg, cfg) == std::vector<std::size_t>{2});
}

TEST_CASE("flux plateaus resolve to their last frame") {
  // mags 0,3,6,9,9 -> flux 00,3,3,3,0: plateau frames 1..3, last one wins
  const Spectrogram sg = single_bin({0, 3, 6, 9, 9, 0, 0, 0});
  CHECK(detect_onsets(sg) == std::vector<std::size_t>{3});
}

TEST_CASE("silence yields no onsets and bad thresholds are rejected") {
  const Spectrogram sg = single_bin({0, 0, 0, 0});
  CHECK(detect_onsets(sg).empty());

  const Spectrogram live = single_bin({0, 5, 0, 0});
  OnsetConfig bad;
  bad.threshold = -0.1;
  CHECK_THROWS(detect_onsets(live, bad));
  bad.threshold = 1.5;
  CHECK_THROWS(detect_onsets(live, bad));
}

TEST_CASE("extract_onset_matrix gathers the requested columns bit-exactly") {
  const Spectrogram sg = from_mags({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {2, 4, 8}});
  const std::vector<std::size_t> frames = {3, 1};
  const OnsetMatrix y = extract_onset_matrix(sg, frames);
  REQUIRE(y.rows() == 3);
  REQUIRE(y.cols() == 2);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(y(f, 0) == sg.x(f, 3));
    CHECK(y(f, 1) == sg.x(f, 1));
  }

  CHECK_THROWS(extract_onset_matrix(sg, {}));
  CHECK_THROWS(extract_onset_matrix(sg, {4}));
}

TEST_CASE("gather_columns mirrors the gather for real tracks") {
  Mat<double> track(2, 3);
  track(0, 0) = 1;
  track(1, 0) = 2;
  track(0, 1) = 3;
  track(1, 1) = 4;
  track(0, 2) = 5;
  track(1, 2) = 6;

  const Mat<double> out = gather_columns(track, {2, 0, 2});
  REQUIRE(out.rows() == 2);
  REQUIRE(out.cols() == 3);
  CHECK(out(0, 0) == 5);
  CHECK(out(1, 0) == 6);
  CHECK(out(0, 1) == 1);
  CHECK(out(1, 1) == 2);
  CHECK(out(0, 2) == 5);

  CHECK_THROWS(gather_columns(track, {}));
  CHECK_THROWS(gather_columns(track, {3}));
}

TEST_CASE("onset lists round-trip through text files") {
  const std::string path = "onset_list_test.txt";
  const std::vector<std::size_t> onsets = {3, 17, 42, 0};
  write_onset_list(path, onsets);
  CHECK(read_onset_list(path) == onsets);

  {
    std::ofstream f(path, std::ios::trunc);
    f << "5\n\n12\n";  // blank lines are skipped
  }
  CHECK(read_onset_list(path) == std::vector<std::size_t>{5, 12});

  {
    std::ofstream f(path, std::ios::trunc);
    f << "5\nnot-a-number\n";
  }
  CHECK_THROWS(read_onset_list(path));

  {
    std::ofstream f(path, std::ios::trunc);
    f << "-3\n";
  }
  CHECK_THROWS(read_onset_list(path));

  CHECK_THROWS(read_onset_list("no_such_onset_file.txt"));
  std::remove(path.c_str());
}

TEST_CASE("detection locates attacks of a synthesized tone") {
  // 0.8 s of silence-tone-silence-tone at the reference config: attacks at
  // known samples must map to their enclosing frames.
  StftConfig cfg;
  const std::size_t len = std::size_t(0.8 * cfg.sample_rate);
  std::vector<double> x(len, 0.0);
  // decaying notes: an abrupt cutoff would splatter its own flux peak
  const double w = kTwoPi * 70.0 / cfg.bins;  // bin-70 tone
  const std::size_t a0 = 10 * cfg.hop, a1 = 40 * cfg.hop;
  for (std::size_t n = 0; n < 2000; ++n) {
    const double env = std::exp(-0.004 * double(n));
    x[a0 + n] = env * std::sin(w * double(n));
    x[a1 + n] = 0.7 * env * std::sin(w * double(n));
  }

  const std::vector<std::size_t> got = detect_onsets(stft(x, cfg));
  REQUIRE(got.size() == 2);
  // the energy ramp spreads over the window: allow the frame straddle
  CHECK(got[0] >= 7);
  CHECK(got[0] <= 11);
  CHECK(got[1] >= 37);
  CHECK(got[1] <= 41);
}
