// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace uwbhar::sim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Stable 64-bit mix for deriving per-frame noise substreams.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double RadioConfig::pulse_sigma_s() const {
  return 1.0 / (kTwoPi * bandwidth_hz * std::sqrt(std::log10(std::numbers::e)));
}

void RadioConfig::validate() const {
  require(carrier_freq_hz > 0, "radio: carrier_freq_hz must be positive");
  require(bandwidth_hz > 0, "radio: bandwidth_hz must be positive");
  require(pulse_amplitude > 0, "radio: pulse_amplitude must be positive");
  require(pulse_duration_s > 0, "radio: pulse_duration_s must be positive");
  require(pulse_repetition_hz > 0, "radio: pulse_repetition_hz must be positive");
  require(adc_interval_s > 0, "radio: adc_interval_s must be positive");
  require(fast_time_bins > 0, "radio: fast_time_bins must be positive");
  require(propagation_speed_mps > 0, "radio: propagation_speed_mps must be positive");
  require(fast_time_bins * adc_interval_s <= 1.0 / pulse_repetition_hz,
          "radio: fast-time window exceeds the frame period");
  const double sigma = pulse_sigma_s();
  require(std::isfinite(sigma) && sigma > 0, "radio: pulse sigma not finite");
}

void PathModel::validate() const {
  require(attenuation >= 0, "path: attenuation must be >= 0");
  require(range_m > 0, "path: range_m must be positive");
  require(micro_amplitude_m >= 0, "path: micro_amplitude_m must be >= 0");
  require(micro_freq_hz >= 0, "path: micro_freq_hz must be >= 0");
  require(std::isfinite(range_m) && std::isfinite(radial_speed_mps), "path: non-finite field");
}

void NoiseModel::validate() const {
  require(awgn_variance >= 0, "noise: awgn_variance must be >= 0");
  require(phase_jitter_std_rad >= 0, "noise: phase_jitter_std_rad must be >= 0");
}

void MotionProfile::validate() const {
  require(!segments.empty(), "profile: at least one segment required");
  for (const auto& seg : segments) {
    require(seg.duration_s > 0, "profile: segment duration must be positive");
    require(seg.kinematics.size() == paths.size(),
            "profile: segment kinematics count must match path count");
  }
  for (const auto& p : paths) p.validate();
}

void FrameMatrix::validate() const {
  require(num_frames >= 1, "frames: K must be >= 1");
  require(num_bins == static_cast<std::size_t>(radio.fast_time_bins),
          "frames: L must match radio.fast_time_bins");
  require(data.size() == num_frames * num_bins, "frames: data size mismatch");
  for (const cplx& z : data)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), "frames: non-finite entry");
}

double gaussian_pulse_at(const RadioConfig& radio, double t) {
  const double sigma = radio.pulse_sigma_s();
  const double dt = t - radio.pulse_duration_s / 2.0;
  return radio.pulse_amplitude * std::exp(-dt * dt / (2.0 * sigma * sigma));
}

std::vector<double> synth_pulse(const RadioConfig& radio, int n_samples) {
  radio.validate();
  require(n_samples >= 1, "synth_pulse: n_samples must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    out[static_cast<std::size_t>(i)] = gaussian_pulse_at(radio, i * radio.adc_interval_s);
  return out;
}

RangeResolution range_resolution(const RadioConfig& radio) {
  require(radio.bandwidth_hz > 0, "range_resolution: bandwidth must be positive");
  return {radio.propagation_speed_mps / (2.0 * radio.bandwidth_hz),
          1.0 / (2.0 * radio.bandwidth_hz)};
}

double path_delay_s(const RadioConfig& radio, const PathModel& path, double slow_time_s) {
  const double c = radio.propagation_speed_mps;
  const double tau_range = 2.0 * path.range_m / c;
  const double tau_doppler = 2.0 * path.radial_speed_mps * slow_time_s / c;
  const double tau_micro =
      2.0 * path.micro_amplitude_m * (1.0 - std::cos(kTwoPi * path.micro_freq_hz * slow_time_s)) /
      c;
  return tau_range + tau_doppler + tau_micro;
}

std::vector<cplx> synth_frame(const RadioConfig& radio, const std::vector<PathModel>& paths,
                              std::size_t frame_index, const NoiseModel& noise) {
  radio.validate();
  noise.validate();

  const std::size_t L = static_cast<std::size_t>(radio.fast_time_bins);
  const double Tn = radio.adc_interval_s;
  const double Ts = radio.frame_period_s();
  const double sigma = radio.pulse_sigma_s();
  const double center = radio.pulse_duration_s / 2.0;
  const double slow_time = static_cast<double>(frame_index) * Ts;

  std::vector<cplx> frame(L, cplx(0.0, 0.0));

  for (const PathModel& path : paths) {
    path.validate();
    if (path.attenuation == 0.0) continue;
    const double tau = path_delay_s(radio, path, slow_time);
    const cplx phasor =
        path.attenuation * std::polar(1.0, kTwoPi * radio.carrier_freq_hz * tau);
    // Envelope support: samples beyond 9 sigma contribute < 3e-18 of the peak.
    const double peak_t = tau + center;
    const long lo = std::max(0L, static_cast<long>(std::floor((peak_t - 9.0 * sigma) / Tn)));
    const long hi =
        std::min(static_cast<long>(L) - 1, static_cast<long>(std::ceil((peak_t + 9.0 * sigma) / Tn)));
    for (long l = lo; l <= hi; ++l) {
      const double dt = l * Tn - peak_t;
      frame[static_cast<std::size_t>(l)] +=
          phasor * (radio.pulse_amplitude * std::exp(-dt * dt / (2.0 * sigma * sigma)));
    }
  }

  if (noise.awgn_variance > 0.0 || noise.phase_jitter_std_rad > 0.0) {
    std::mt19937_64 rng(splitmix64(noise.seed ^ splitmix64(frame_index + 1)));
    if (noise.awgn_variance > 0.0) {
      // complex AWGN with E|n|^2 = awgn_variance
      std::normal_distribution<double> gauss(0.0, std::sqrt(noise.awgn_variance / 2.0));
      for (cplx& z : frame) z += cplx(gauss(rng), gauss(rng));
    }
    if (noise.phase_jitter_std_rad > 0.0) {
      std::normal_distribution<double> jitter(0.0, noise.phase_jitter_std_rad);
      const cplx rot = std::polar(1.0, jitter(rng));
      for (cplx& z : frame) z *= rot;
    }
  }

  return frame;
}

FrameMatrix simulate_activity(const RadioConfig& radio, const std::vector<PathModel>& static_paths,
                              const MotionProfile& profile, const NoiseModel& noise,
                              double duration_s) {
  radio.validate();
  profile.validate();
  require(duration_s > 0, "simulate_activity: duration must be positive");

  const double Ts = radio.frame_period_s();
  const std::size_t K =
      static_cast<std::size_t>(std::llround(duration_s * radio.pulse_repetition_hz));
  require(K >= 1, "simulate_activity: duration shorter than one frame");
  const std::size_t L = static_cast<std::size_t>(radio.fast_time_bins);

  FrameMatrix out;
  out.num_frames = K;
  out.num_bins = L;
  out.radio = radio;
  out.frame_period_s = Ts;
  out.data.resize(K * L);

  // Moving paths evolve by cumulative range integration; the per-frame call
  // sees them with zero bulk speed so the Doppler phase comes from the
  // updated range alone. Micro motion keeps the global frame index.
  std::vector<PathModel> moving = profile.paths;
  std::vector<PathModel> all;
  all.reserve(static_paths.size() + moving.size());

  std::size_t seg_idx = 0;
  double seg_end = profile.segments.empty() ? duration_s : profile.segments[0].duration_s;

  for (std::size_t k = 0; k < K; ++k) {
    const double t = static_cast<double>(k) * Ts;
    while (seg_idx + 1 < profile.segments.size() && t >= seg_end)
      seg_end += profile.segments[++seg_idx].duration_s;
    const ProfileSegment& seg = profile.segments[seg_idx];

    all.assign(static_paths.begin(), static_paths.end());
    for (std::size_t p = 0; p < moving.size(); ++p) {
      PathModel snapshot = moving[p];
      snapshot.radial_speed_mps = 0.0;
      snapshot.micro_amplitude_m = seg.kinematics[p].micro_amplitude_m;
      snapshot.micro_freq_hz = seg.kinematics[p].micro_freq_hz;
      all.push_back(snapshot);
    }

    std::vector<cplx> frame = synth_frame(radio, all, k, noise);
    std::copy(frame.begin(), frame.end(), out.row(k));

    for (std::size_t p = 0; p < moving.size(); ++p) {
      moving[p].range_m += seg.kinematics[p].radial_speed_mps * Ts;
      if (moving[p].range_m < 0.05) moving[p].range_m = 0.05;  // clamp at the antenna
    }
  }

  out.validate();
  return out;
}

}  // namespace uwbhar::sim
