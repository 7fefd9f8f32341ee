// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace uwbhar::sim {

using cplx = std::complex<double>;

// Pulse, carrier, sampling and geometry parameters of the simulated
// impulse-radio transceiver.
struct RadioConfig {
  double carrier_freq_hz = 7.3e9;
  double bandwidth_hz = 1.4e9;        // -10 dB bandwidth
  double pulse_amplitude = 1.0;
  double pulse_duration_s = 2.0e-9;   // envelope is centered at half this
  double pulse_repetition_hz = 400.0;
  double adc_interval_s = 1.0 / 1.4e9;  // 60 bins span ~6.4 m
  int fast_time_bins = 60;
  double propagation_speed_mps = 2.998e8;

  double frame_period_s() const { return 1.0 / pulse_repetition_hz; }
  // Standard deviation of the Gaussian envelope for the -10 dB bandwidth.
  double pulse_sigma_s() const;
  void validate() const;  // throws std::invalid_argument
};

// One reflection path: bulk range/velocity plus a small oscillatory
// displacement (breathing-like micro motion).
struct PathModel {
  double attenuation = 1.0;
  double range_m = 1.0;
  double radial_speed_mps = 0.0;   // positive = receding
  double micro_amplitude_m = 0.0;
  double micro_freq_hz = 0.0;

  void validate() const;
};

struct NoiseModel {
  double awgn_variance = 0.0;        // E|n|^2 of the complex noise sample
  double phase_jitter_std_rad = 0.0; // per-frame common phase rotation
  std::uint64_t seed = 0;

  void validate() const;
};

// Piecewise-constant kinematics for one path during one profile segment.
struct PathKinematics {
  double radial_speed_mps = 0.0;
  double micro_amplitude_m = 0.0;
  double micro_freq_hz = 0.0;
};

struct ProfileSegment {
  double duration_s = 0.0;
  std::vector<PathKinematics> kinematics;  // one entry per profile path
};

// Scripted moving reflectors for one activity: initial path states plus an
// ordered list of segments overriding speed / micro parameters. Segments
// shorter than the simulated duration extend the last segment.
struct MotionProfile {
  std::string label;
  std::vector<PathModel> paths;          // initial state of the moving reflectors
  std::vector<ProfileSegment> segments;
  std::string description;

  void validate() const;
};

// K x L complex baseband matrix: K slow-time frames of L fast-time bins.
struct FrameMatrix {
  std::vector<cplx> data;  // row-major, slow-time major
  std::size_t num_frames = 0;  // K
  std::size_t num_bins = 0;    // L
  RadioConfig radio;
  double frame_period_s = 0.0;

  cplx& at(std::size_t k, std::size_t l) { return data[k * num_bins + l]; }
  const cplx& at(std::size_t k, std::size_t l) const { return data[k * num_bins + l]; }
  cplx* row(std::size_t k) { return data.data() + k * num_bins; }
  const cplx* row(std::size_t k) const { return data.data() + k * num_bins; }

  void validate() const;  // shape and finiteness
};

// Gaussian envelope value at continuous time t.
double gaussian_pulse_at(const RadioConfig& radio, double t);

// Transmit pulse sampled at the ADC grid, sample i at t = i * adc_interval_s.
std::vector<double> synth_pulse(const RadioConfig& radio, int n_samples);

struct RangeResolution {
  double delta_r_m;
  double delta_tau_s;
};
RangeResolution range_resolution(const RadioConfig& radio);

// Round-trip delays of a path evaluated at slow time k * T_s.
double path_delay_s(const RadioConfig& radio, const PathModel& path, double slow_time_s);

// One received baseband frame: per-path phasor times the delayed envelope,
// plus complex white noise and an optional common phase jitter. Noise and
// jitter are drawn from a substream derived from (seed, frame_index), so a
// frame is reproducible in isolation and inside a longer simulation.
std::vector<cplx> synth_frame(const RadioConfig& radio, const std::vector<PathModel>& paths,
                              std::size_t frame_index, const NoiseModel& noise);

// Simulates duration_s seconds of a scripted activity over static clutter.
// Moving-path range integrates cumulatively (R += v * T_s per frame) so
// per-segment speed changes accumulate displacement.
FrameMatrix simulate_activity(const RadioConfig& radio, const std::vector<PathModel>& static_paths,
                              const MotionProfile& profile, const NoiseModel& noise,
                              double duration_s);

}  // namespace uwbhar::sim
