// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "uwbhar/dsp.hpp"
#include "uwbhar/sim.hpp"

using namespace uwbhar;
using namespace uwbhar::dsp;
using uwbhar::sim::cplx;
using uwbhar::sim::FrameMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

FrameMatrix static_scene(int frames, double jitter_std, std::uint64_t seed,
                         double awgn = 0.0) {
  sim::RadioConfig radio;
  sim::MotionProfile profile;
  profile.label = "static";
  profile.segments = {{static_cast<double>(frames) / radio.pulse_repetition_hz, {}}};
  sim::NoiseModel noise{awgn, jitter_std, seed};
  return sim::simulate_activity(radio, {{1.0, 1.5, 0, 0, 0}, {0.4, 3.2, 0, 0, 0}}, profile,
                                noise, static_cast<double>(frames) / radio.pulse_repetition_hz);
}

// designed filter response at f (sample rate fs)
double taps_response(const std::vector<double>& taps, double f, double fs) {
  cplx acc(0.0, 0.0);
  for (std::size_t n = 0; n < taps.size(); ++n)
    acc += taps[n] * std::polar(1.0, -2.0 * kPi * f / fs * static_cast<double>(n));
  return std::abs(acc);
}

int reference_bin(const FrameMatrix& m) {
  int best = 0;
  double best_amp = -1.0;
  for (std::size_t l = 0; l < m.num_bins; ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m.num_frames; ++k) acc += std::abs(m.at(k, l));
    if (acc > best_amp) {
      best_amp = acc;
      best = static_cast<int>(l);
    }
  }
  return best;
}

double ref_bin_phase_std(const FrameMatrix& m) {
  const int ref = reference_bin(m);
  cplx mean(0.0, 0.0);
  for (std::size_t k = 0; k < m.num_frames; ++k) mean += m.at(k, static_cast<std::size_t>(ref));
  double acc = 0.0;
  for (std::size_t k = 0; k < m.num_frames; ++k) {
    const double d = std::arg(m.at(k, static_cast<std::size_t>(ref)) * std::conj(mean));
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(m.num_frames));
}

}  // namespace

TEST_CASE("correct_phase: no jitter means one global rotation") {
  FrameMatrix in = static_scene(64, 0.0, 1);
  FrameMatrix out = correct_phase(in);
  // find the constant rotation from the strongest sample
  cplx rot(0, 0);
  double best = -1;
  for (std::size_t i = 0; i < in.data.size(); ++i)
    if (std::abs(in.data[i]) > best) {
      best = std::abs(in.data[i]);
      rot = out.data[i] / in.data[i];
    }
  CHECK(std::abs(rot) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < in.data.size(); ++i)
    CHECK(std::abs(out.data[i] - in.data[i] * rot) <= 1e-12 * best);
}

TEST_CASE("correct_phase: removes injected 0.3 rad frame jitter") {
  FrameMatrix in = static_scene(256, 0.3, 77);
  CHECK(ref_bin_phase_std(in) > 0.1);  // jitter clearly present
  FrameMatrix out = correct_phase(in);
  CHECK(ref_bin_phase_std(out) < 1e-9);
}

TEST_CASE("correct_phase: re-concentrates slow-time energy at DC in every active bin") {
  FrameMatrix in = static_scene(256, 0.3, 5);
  FrameMatrix out = correct_phase(in);
  double peak = 0.0;
  for (const cplx& z : out.data) peak = std::max(peak, std::abs(z));
  for (std::size_t l = 0; l < out.num_bins; ++l) {
    std::vector<cplx> column(out.num_frames);
    for (std::size_t k = 0; k < out.num_frames; ++k) column[k] = out.at(k, l);
    if (std::abs(column[0]) < 1e-6 * peak) continue;
    const auto spectrum = testutil::naive_dft(column);
    double total = 0.0;
    for (const cplx& z : spectrum) total += std::norm(z);
    CHECK(std::norm(spectrum[0]) / total >= 0.999);
  }
}

TEST_CASE("correct_phase: idempotent") {
  FrameMatrix in = static_scene(128, 0.25, 9);
  FrameMatrix once = correct_phase(in);
  FrameMatrix twice = correct_phase(once);
  double peak = 0.0;
  for (const cplx& z : once.data) peak = std::max(peak, std::abs(z));
  for (std::size_t i = 0; i < once.data.size(); ++i)
    CHECK(std::abs(once.data[i] - twice.data[i]) <= 1e-12 * peak);
}

TEST_CASE("correct_phase: all-zero input has no reference") {
  FrameMatrix zero;
  zero.num_frames = 8;
  zero.num_bins = 60;
  zero.radio = sim::RadioConfig{};
  zero.frame_period_s = zero.radio.frame_period_s();
  zero.data.assign(8 * 60, cplx(0, 0));
  CHECK_THROWS_AS(correct_phase(zero), std::invalid_argument);
}

TEST_CASE("fir design: DC gain, stopband and passband") {
  const auto taps = fir_lowpass_taps(kFirTaps, kFirCutoffHz, 400.0);
  REQUIRE(taps.size() == 26);
  CHECK(taps_response(taps, 0.0, 400.0) == doctest::Approx(1.0).epsilon(1e-6));
  // >= 40 dB attenuation at 150 Hz per the designed response
  CHECK(20.0 * std::log10(taps_response(taps, 150.0, 400.0)) <= -40.0);
  // passband ripple within +-1 dB at 20 Hz
  CHECK(std::abs(20.0 * std::log10(taps_response(taps, 20.0, 400.0))) <= 1.0);
}

TEST_CASE("fir_lowpass: constant input passes unchanged in the interior") {
  std::vector<double> x(200, 3.25);
  const auto y = fir_lowpass(x);
  REQUIRE(y.size() == x.size());
  for (std::size_t n = 26; n + 26 < y.size(); ++n)
    CHECK(y[n] == doctest::Approx(3.25).epsilon(1e-6));
}

TEST_CASE("fir_lowpass: tone attenuation follows the designed response") {
  const auto taps = fir_lowpass_taps(kFirTaps, kFirCutoffHz, 400.0);
  for (double f : {20.0, 150.0}) {
    std::vector<double> x(400);
    for (std::size_t n = 0; n < x.size(); ++n)
      x[n] = std::sin(2.0 * kPi * f / 400.0 * static_cast<double>(n));
    const auto y = fir_lowpass(x);
    double in_rms = 0.0, out_rms = 0.0;
    for (std::size_t n = 40; n + 40 < x.size(); ++n) {
      in_rms += x[n] * x[n];
      out_rms += y[n] * y[n];
    }
    const double gain = std::sqrt(out_rms / in_rms);
    CHECK(gain == doctest::Approx(taps_response(taps, f, 400.0)).epsilon(0.05).scale(1.0));
  }
}

TEST_CASE("fir_lowpass: linear and shift invariant in the interior") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> x(300), y(300);
  for (auto& v : x) v = d(rng);
  for (auto& v : y) v = d(rng);

  std::vector<double> combo(300);
  for (std::size_t i = 0; i < 300; ++i) combo[i] = 2.0 * x[i] - 0.5 * y[i];
  const auto fc = fir_lowpass(combo);
  const auto fx = fir_lowpass(x);
  const auto fy = fir_lowpass(y);
  for (std::size_t i = 0; i < 300; ++i)
    CHECK(fc[i] == doctest::Approx(2.0 * fx[i] - 0.5 * fy[i]).epsilon(1e-12).scale(1.0));

  // shift by 7 samples
  std::vector<double> shifted(300, 0.0);
  for (std::size_t i = 7; i < 300; ++i) shifted[i] = x[i - 7];
  const auto fs = fir_lowpass(shifted);
  for (std::size_t i = 40; i + 40 < 300; ++i)
    CHECK(fs[i] == doctest::Approx(fx[i - 7]).epsilon(1e-12).scale(1.0));

  CHECK_THROWS_AS(fir_lowpass(std::vector<double>(10, 1.0)), std::invalid_argument);
}

TEST_CASE("smooth: constant, impulse, edges, noise variance") {
  std::vector<double> c(50, 2.0);
  CHECK(smooth(c) == c);

  std::vector<double> impulse(21, 0.0);
  impulse[10] = 1.0;
  const auto s = smooth(impulse);
  for (int i = 8; i <= 12; ++i) CHECK(s[static_cast<std::size_t>(i)] == doctest::Approx(0.2));
  CHECK(s[7] == doctest::Approx(0.0));
  CHECK(s[13] == doctest::Approx(0.0));

  // shrunken edge windows
  std::vector<double> edge = {1, 0, 0, 0, 0, 0};
  CHECK(smooth(edge)[0] == doctest::Approx(1.0 / 3.0));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(100000);
  for (auto& v : noise) v = gauss(rng);
  const auto sn = smooth(noise);
  double var = 0.0;
  for (std::size_t i = 2; i + 2 < sn.size(); ++i) var += sn[i] * sn[i];
  var /= static_cast<double>(sn.size() - 4);
  CHECK(var == doctest::Approx(0.2).epsilon(0.25));  // 0.2 +- 0.05

  CHECK_THROWS_AS(smooth(std::vector<double>(3, 1.0)), std::invalid_argument);
}

TEST_CASE("background_subtract: static scene cancels, zero stays zero") {
  FrameMatrix in = static_scene(256, 0.0, 2);
  FrameMatrix out = background_subtract(in);
  double peak = 0.0;
  for (const cplx& z : in.data) peak = std::max(peak, std::abs(z));
  for (std::size_t k = 100; k < out.num_frames; ++k)
    for (std::size_t l = 0; l < out.num_bins; ++l)
      CHECK(std::abs(out.at(k, l)) < 1e-3 * peak);

  FrameMatrix zero = in;
  std::fill(zero.data.begin(), zero.data.end(), cplx(0, 0));
  FrameMatrix zout = background_subtract(zero);
  for (const cplx& z : zout.data) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("background_subtract: high-pass response matches the EMA oracle") {
  // synthetic column: static clutter + complex tone at f
  sim::RadioConfig radio;
  const int K = 400;
  for (double f : {10.0, 48.0, 120.0}) {
    FrameMatrix m;
    m.num_frames = K;
    m.num_bins = static_cast<std::size_t>(radio.fast_time_bins);
    m.radio = radio;
    m.frame_period_s = radio.frame_period_s();
    m.data.assign(m.num_frames * m.num_bins, cplx(0, 0));
    for (int k = 0; k < K; ++k)
      m.at(static_cast<std::size_t>(k), 5) =
          cplx(5.0, 0.0) + std::polar(1.0, 2.0 * kPi * f / 400.0 * k);

    FrameMatrix out = background_subtract(m);
    std::vector<cplx> in_col(m.num_frames), out_col(m.num_frames);
    for (int k = 0; k < K; ++k) {
      in_col[static_cast<std::size_t>(k)] = m.at(static_cast<std::size_t>(k), 5);
      out_col[static_cast<std::size_t>(k)] = out.at(static_cast<std::size_t>(k), 5);
    }
    // discard EMA warm-up, compare steady-state DFTs at the tone bin
    const int skip = 100;
    std::vector<cplx> in_ss(in_col.begin() + skip, in_col.end());
    std::vector<cplx> out_ss(out_col.begin() + skip, out_col.end());
    const auto in_spec = testutil::naive_dft(in_ss);
    const auto out_spec = testutil::naive_dft(out_ss);
    const std::size_t bin =
        static_cast<std::size_t>(std::lround(f / 400.0 * static_cast<double>(in_ss.size())));
    const double measured = std::abs(out_spec[bin]) / std::abs(in_spec[bin]);
    const double predicted = background_subtract_response(f, 400.0);
    CHECK(measured == doctest::Approx(predicted).epsilon(0.02));
    // motion spectrum preserved within 1 dB well above the EMA corner
    if (f >= 10.0) CHECK(std::abs(20.0 * std::log10(predicted)) <= 1.0);
  }
}

TEST_CASE("fast_time_std: definition, homogeneity, errors") {
  sim::RadioConfig radio;
  radio.fast_time_bins = 8;
  radio.adc_interval_s = 1.0 / radio.bandwidth_hz;
  FrameMatrix m;
  m.num_frames = 4;
  m.num_bins = 8;
  m.radio = radio;
  m.frame_period_s = radio.frame_period_s();
  m.data.assign(32, cplx(1.0, 0.0));  // constant magnitude
  for (int k = 0; k < 4; ++k) m.at(static_cast<std::size_t>(k), 3) = cplx(k % 2 == 0 ? 0.0 : 2.0, 0.0);

  DetectorConfig cfg;
  cfg.window_frames = 4;
  const auto sd = fast_time_std(m, cfg);
  CHECK(sd[0] == doctest::Approx(0.0));
  CHECK(sd[3] == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));

  FrameMatrix scaled = m;
  for (cplx& z : scaled.data) z *= 3.7;
  const auto sd2 = fast_time_std(scaled, cfg);
  for (std::size_t l = 0; l < sd.size(); ++l)
    CHECK(sd2[l] == doctest::Approx(3.7 * sd[l]).epsilon(1e-12));

  DetectorConfig bad = cfg;
  bad.window_frames = 1;
  CHECK_THROWS_AS(fast_time_std(m, bad), std::invalid_argument);
  DetectorConfig too_big = cfg;
  too_big.window_frames = 400;
  CHECK_THROWS_AS(fast_time_std(m, too_big), std::invalid_argument);
}

TEST_CASE("detect_motion: peak-average boundary cases") {
  DetectorConfig cfg;  // coef 1.5, guard 3

  std::vector<double> flat(60, 1.0);
  CHECK_FALSE(detect_motion(flat, cfg).detected);

  std::vector<double> hit = flat;
  hit[30] = 2.0;
  const auto r = detect_motion(hit, cfg);
  CHECK(r.detected);
  CHECK(r.peak_bin == 30);
  CHECK(r.threshold == doctest::Approx(1.5));
  CHECK(r.sd_vector[30] > r.threshold);

  std::vector<double> weak = flat;
  weak[30] = 1.4;
  CHECK_FALSE(detect_motion(weak, cfg).detected);

  // scale invariance
  for (double a : {0.001, 7.0, 4000.0}) {
    std::vector<double> scaled = hit;
    for (double& v : scaled) v *= a;
    const auto rs = detect_motion(scaled, cfg);
    CHECK(rs.detected == r.detected);
    CHECK(rs.peak_bin == r.peak_bin);
  }

  CHECK_THROWS_AS(detect_motion(std::vector<double>(5, 1.0), cfg), std::invalid_argument);
}

TEST_CASE("pipeline order detects strong motion through 5 m") {
  sim::RadioConfig radio;
  DetectorConfig det;
  for (double range : {2.0, 3.5, 5.0}) {
    sim::MotionProfile profile;
    profile.label = "move";
    profile.paths = {{1.0 / (range * range), range, 0, 0, 0}};
    profile.segments = {{1.0, {{0.8, 0.01, 1.5}}}};
    sim::NoiseModel noise{1e-4, 0.1, 321};
    const FrameMatrix raw =
        sim::simulate_activity(radio, {{1.0, 1.2, 0, 0, 0}}, profile, noise, 1.0);
    const FrameMatrix processed = preprocess(raw);
    const auto report = detect_motion(fast_time_std(processed, det), det);
    INFO("range ", range);
    CHECK(report.detected);
  }
}
