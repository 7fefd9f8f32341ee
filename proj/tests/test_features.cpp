// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "uwbhar/features.hpp"
#include "uwbhar/sim.hpp"

using namespace uwbhar;
using namespace uwbhar::features;
using uwbhar::sim::cplx;
using uwbhar::sim::FrameMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

FrameMatrix empty_window() {
  FrameMatrix m;
  m.radio = sim::RadioConfig{};
  m.num_frames = kWindowFrames;
  m.num_bins = kFastTimeBins;
  m.frame_period_s = m.radio.frame_period_s();
  m.data.assign(m.num_frames * m.num_bins, cplx(0, 0));
  return m;
}

FrameMatrix simulated_window(double speed, std::uint64_t seed, double range = 2.2) {
  sim::RadioConfig radio;
  sim::MotionProfile profile;
  profile.label = "probe";
  profile.paths = {{1.0, range, 0, 0, 0}};
  profile.segments = {{1.0, {{speed, 0.0, 0.0}}}};
  sim::NoiseModel noise{0.0, 0.0, seed};
  return sim::simulate_activity(radio, {}, profile, noise, 1.0);
}

int row_argmax(const Spectrogram& s, int row) {
  int best = 0;
  for (int c = 1; c < s.cols; ++c)
    if (s.at(row, c) > s.at(row, best)) best = c;
  return best;
}

}  // namespace

TEST_CASE("time_spectrogram: zeros, static rows, shape errors") {
  const Spectrogram zero = time_spectrogram(empty_window());
  CHECK(zero.rows == 400);
  CHECK(zero.cols == 60);
  for (double v : zero.data) CHECK(v == 0.0);

  const FrameMatrix window = simulated_window(0.0, 3);
  const Spectrogram s = time_spectrogram(window);
  CHECK(s.kind == SpectrogramKind::TimeDomain);
  for (int r = 1; r < s.rows; ++r)
    for (int c = 0; c < s.cols; ++c) CHECK(s.at(r, c) == doctest::Approx(s.at(0, c)));

  // magnitude of the underlying samples
  for (int c = 0; c < s.cols; ++c)
    CHECK(s.at(0, c) == doctest::Approx(std::abs(window.at(0, static_cast<std::size_t>(c)))));

  FrameMatrix bad = window;
  bad.num_frames = 100;
  bad.data.resize(100 * 60);
  CHECK_THROWS_AS(time_spectrogram(bad), std::invalid_argument);
}

TEST_CASE("doppler_spectrogram: matches the naive DFT oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1, 1);
  FrameMatrix window = empty_window();
  for (cplx& z : window.data) z = cplx(d(rng), d(rng));

  const Spectrogram s = doppler_spectrogram(window);
  CHECK(s.kind == SpectrogramKind::DopplerDomain);
  for (int l = 0; l < 60; l += 13) {
    std::vector<cplx> column(400);
    for (int k = 0; k < 400; ++k)
      column[static_cast<std::size_t>(k)] =
          window.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
    const auto oracle = testutil::naive_dft(column);
    for (int q = 0; q < 400; q += 7)
      CHECK(s.at(q, l) ==
            doctest::Approx(std::log1p(std::abs(oracle[static_cast<std::size_t>(q)])))
                .epsilon(1e-9));
  }
}

TEST_CASE("doppler_spectrogram: pure 50 Hz exponential peaks at row 50") {
  FrameMatrix window = empty_window();
  for (int k = 0; k < 400; ++k)
    window.at(static_cast<std::size_t>(k), 7) = std::polar(1.0, 2.0 * kPi * 50.0 / 400.0 * k);
  const Spectrogram s = doppler_spectrogram(window);
  int best = 0;
  for (int q = 1; q < 400; ++q)
    if (s.at(q, 7) > s.at(best, 7)) best = q;
  CHECK(best == 50);
}

TEST_CASE("doppler_spectrogram: 1 m/s path peaks at row 49") {
  const FrameMatrix window = simulated_window(1.0, 4);
  const Spectrogram s = doppler_spectrogram(window);
  // most energetic fast-time column
  int col = 0;
  double best_energy = -1.0;
  for (int l = 0; l < 60; ++l) {
    double acc = 0.0;
    for (int q = 0; q < 400; ++q) acc += s.at(q, l);
    if (acc > best_energy) {
      best_energy = acc;
      col = l;
    }
  }
  int best = 0;
  for (int q = 1; q < 400; ++q)
    if (s.at(q, col) > s.at(best, col)) best = q;
  CHECK(best == 49);
}

TEST_CASE("doppler_spectrogram: Parseval per column, pre-log") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> d(-1, 1);
  FrameMatrix window = empty_window();
  for (cplx& z : window.data) z = cplx(d(rng), d(rng));
  const Spectrogram s = doppler_spectrogram(window);

  for (int l = 0; l < 60; l += 11) {
    double signal_energy = 0.0;
    for (int k = 0; k < 400; ++k)
      signal_energy += std::norm(window.at(static_cast<std::size_t>(k),
                                           static_cast<std::size_t>(l)));
    double dft_energy = 0.0;
    for (int q = 0; q < 400; ++q) {
      const double mag = std::expm1(s.at(q, l));
      dft_energy += mag * mag;
    }
    CHECK(dft_energy / 400.0 == doctest::Approx(signal_energy).epsilon(1e-9));
  }
}

TEST_CASE("doppler_spectrogram: DFT symmetry properties") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-1, 1);
  FrameMatrix window = empty_window();
  for (cplx& z : window.data) z = cplx(d(rng), d(rng));
  const Spectrogram s = doppler_spectrogram(window);

  // conjugation mirrors the Doppler axis: row q <-> row (400 - q) % 400
  FrameMatrix conj_win = window;
  for (cplx& z : conj_win.data) z = std::conj(z);
  const Spectrogram sc = doppler_spectrogram(conj_win);
  for (int q = 0; q < 400; q += 9)
    for (int l = 0; l < 60; l += 7)
      CHECK(sc.at(q, l) == doctest::Approx(s.at((400 - q) % 400, l)).epsilon(1e-9));

  // conjugation plus time reversal leaves the magnitudes unchanged
  FrameMatrix rev = window;
  for (int k = 0; k < 400; ++k)
    for (int l = 0; l < 60; ++l)
      rev.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) =
          std::conj(window.at(static_cast<std::size_t>(399 - k), static_cast<std::size_t>(l)));
  const Spectrogram sr = doppler_spectrogram(rev);
  for (int q = 0; q < 400; q += 9)
    for (int l = 0; l < 60; l += 7)
      CHECK(sr.at(q, l) == doctest::Approx(s.at(q, l)).epsilon(1e-9));
}

TEST_CASE("both spectrograms share the 400x60 shape") {
  const FrameMatrix window = simulated_window(0.5, 6);
  const Spectrogram t = time_spectrogram(window);
  const Spectrogram f = doppler_spectrogram(window);
  CHECK(t.rows == f.rows);
  CHECK(t.cols == f.cols);
  CHECK(t.data.size() == f.data.size());
}

TEST_CASE("normalize: constant, moments, idempotence") {
  Spectrogram constant;
  constant.data.assign(400 * 60, 5.5);
  const Spectrogram z = normalize(constant);
  for (double v : z.data) CHECK(v == 0.0);
  CHECK(z.normalization == Normalization::ZScore);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(0, 10);
  Spectrogram s;
  s.data.resize(400 * 60);
  for (double& v : s.data) v = d(rng);
  const Spectrogram n = normalize(s);
  double mean = 0.0;
  for (double v : n.data) mean += v;
  mean /= static_cast<double>(n.data.size());
  double var = 0.0;
  for (double v : n.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n.data.size());
  CHECK(std::abs(mean) < 1e-9);
  CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-6));

  const Spectrogram again = normalize(n);
  for (std::size_t i = 0; i < n.data.size(); ++i)
    CHECK(again.data[i] == doctest::Approx(n.data[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("walking ridge slope matches the geometry") {
  const FrameMatrix window = simulated_window(-1.0, 8);
  const Spectrogram s = time_spectrogram(window);
  const int shift = row_argmax(s, 0) - row_argmax(s, 399);
  // 1 m over 1 s at 0.1071 m per bin
  CHECK(shift == 9);
}
