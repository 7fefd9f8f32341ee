// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "uwbhar/kernels.hpp"

namespace uwbhar::dsp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> default_taps() {
  static const std::vector<double> taps = fir_lowpass_taps(kFirTaps, kFirCutoffHz, 400.0);
  return taps;
}

// "same"-mode convolution with zero-padded edges: y[n] = sum_i h[i] x[n+off-i]
// with off = (taps-1)/2.
template <typename T>
std::vector<T> convolve_same(const std::vector<T>& x, const std::vector<double>& h) {
  require(x.size() >= h.size(), "fir_lowpass: signal shorter than the filter");
  const long n = static_cast<long>(x.size());
  const long m = static_cast<long>(h.size());
  const long off = (m - 1) / 2;
  std::vector<T> y(x.size(), T(0));
  for (long i = 0; i < n; ++i) {
    T acc(0);
    const long lo = std::max(0L, i + off - n + 1);
    const long hi = std::min(m - 1, i + off);
    for (long j = lo; j <= hi; ++j) acc += x[static_cast<std::size_t>(i + off - j)] * h[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

// Same convolution with edge replication instead of zeros. A chopped-out
// window of a continuous capture has no physical zeros at its ends;
// zero padding would ramp strong static bins up and down at the window
// edges and those ramps dominate the detector's standard deviations.
template <typename T>
std::vector<T> convolve_same_replicate(const std::vector<T>& x, const std::vector<double>& h) {
  require(x.size() >= h.size(), "fir_lowpass: signal shorter than the filter");
  const long n = static_cast<long>(x.size());
  const long m = static_cast<long>(h.size());
  const long off = (m - 1) / 2;
  std::vector<T> y(x.size(), T(0));
  for (long i = 0; i < n; ++i) {
    T acc(0);
    for (long j = 0; j < m; ++j) {
      const long idx = std::clamp(i + off - j, 0L, n - 1);
      acc += x[static_cast<std::size_t>(idx)] * h[static_cast<std::size_t>(j)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

template <typename T>
std::vector<T> smooth_impl(const std::vector<T>& x) {
  require(x.size() >= 5, "smooth: signal shorter than the 5-point window");
  const long n = static_cast<long>(x.size());
  std::vector<T> y(x.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - 2);
    const long hi = std::min(n - 1, i + 2);
    T acc(0);
    for (long j = lo; j <= hi; ++j) acc += x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
  }
  return y;
}

}  // namespace

void DetectorConfig::validate() const {
  require(coef > 1.0, "detector: coef must exceed 1");
  require(guard_cells >= 0, "detector: guard_cells must be >= 0");
  require(min_cells_over >= 1, "detector: min_cells_over must be >= 1");
  require(window_frames >= 2, "detector: window_frames must be >= 2");
}

FrameMatrix correct_phase(const FrameMatrix& frames) {
  require(frames.num_frames >= 2, "correct_phase: need at least two frames");
  const std::size_t K = frames.num_frames;
  const std::size_t L = frames.num_bins;

  // Reference: fast-time bin with maximum mean amplitude.
  std::size_t ref = 0;
  double best = -1.0;
  for (std::size_t l = 0; l < L; ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) acc += std::abs(frames.at(k, l));
    if (acc > best) {
      best = acc;
      ref = l;
    }
  }
  if (best <= 0.0) throw std::invalid_argument("correct_phase: all-zero input, no reference");

  cplx mean(0.0, 0.0);
  for (std::size_t k = 0; k < K; ++k) mean += frames.at(k, ref);
  const double omega_hat = std::arg(mean);

  FrameMatrix out = frames;
  for (std::size_t k = 0; k < K; ++k) {
    const double phi_k = std::arg(frames.at(k, ref));
    const cplx rot = std::polar(1.0, omega_hat - phi_k);
    cplx* row = out.row(k);
    for (std::size_t l = 0; l < L; ++l) row[l] *= rot;
  }
  return out;
}

std::vector<double> fir_lowpass_taps(int taps, double cutoff_hz, double sample_rate_hz) {
  require(taps >= 2, "fir: need at least two taps");
  require(cutoff_hz > 0 && cutoff_hz < sample_rate_hz / 2.0, "fir: cutoff out of range");
  const double fn = 2.0 * cutoff_hz / sample_rate_hz;  // normalized (1 = Nyquist)
  const double alpha = (taps - 1) / 2.0;
  std::vector<double> h(static_cast<std::size_t>(taps));
  for (int i = 0; i < taps; ++i) {
    const double x = std::numbers::pi * fn * (i - alpha);
    const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
    const double window = 0.54 - 0.46 * std::cos(kTwoPi * i / (taps - 1));
    h[static_cast<std::size_t>(i)] = fn * sinc * window;
  }
  const double gain = kern::sum(h.data(), h.size());
  for (double& v : h) v /= gain;  // unit DC gain
  return h;
}

std::vector<double> fir_lowpass(const std::vector<double>& signal,
                                const std::vector<double>& taps) {
  return convolve_same(signal, taps.empty() ? default_taps() : taps);
}

std::vector<cplx> fir_lowpass(const std::vector<cplx>& signal, const std::vector<double>& taps) {
  return convolve_same(signal, taps.empty() ? default_taps() : taps);
}

std::vector<double> smooth(const std::vector<double>& signal) { return smooth_impl(signal); }
std::vector<cplx> smooth(const std::vector<cplx>& signal) { return smooth_impl(signal); }

FrameMatrix cascade_filter(const FrameMatrix& frames) {
  const std::size_t K = frames.num_frames;
  const std::size_t L = frames.num_bins;
  const std::vector<double> taps = default_taps();
  FrameMatrix out = frames;
  std::vector<cplx> column(K);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t k = 0; k < K; ++k) column[k] = frames.at(k, l);
    column = smooth(convolve_same_replicate(column, taps));
    for (std::size_t k = 0; k < K; ++k) out.at(k, l) = column[k];
  }
  return out;
}

FrameMatrix background_subtract(const FrameMatrix& frames, double forgetting) {
  require(frames.num_frames >= 2, "background_subtract: need at least two frames");
  require(forgetting > 0.0 && forgetting < 1.0, "background_subtract: forgetting in (0,1)");
  const std::size_t K = frames.num_frames;
  const std::size_t L = frames.num_bins;

  FrameMatrix out = frames;
  std::vector<cplx> mean(frames.row(0), frames.row(0) + L);  // seeded with frame 0
  for (std::size_t k = 0; k < K; ++k) {
    const cplx* in = frames.row(k);
    cplx* dst = out.row(k);
    for (std::size_t l = 0; l < L; ++l) {
      dst[l] = in[l] - mean[l];
      mean[l] = forgetting * mean[l] + (1.0 - forgetting) * in[l];
    }
  }
  return out;
}

double background_subtract_response(double frequency_hz, double sample_rate_hz,
                                    double forgetting) {
  const double w = kTwoPi * frequency_hz / sample_rate_hz;
  const cplx z = std::polar(1.0, -w);
  return std::abs(1.0 - z) / std::abs(1.0 - forgetting * z);
}

std::vector<double> fast_time_std(const FrameMatrix& frames, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t N = static_cast<std::size_t>(cfg.window_frames);
  require(N <= frames.num_frames, "fast_time_std: window exceeds available frames");
  const std::size_t L = frames.num_bins;
  const std::size_t start = frames.num_frames - N;

  std::vector<double> sd(L);
  std::vector<double> column(N);
  std::vector<cplx> gathered(N);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t k = 0; k < N; ++k) gathered[k] = frames.at(start + k, l);
    kern::ops().cmag_f64(column.data(), reinterpret_cast<const double*>(gathered.data()), N);
    const double mean = kern::sum(column.data(), N) / static_cast<double>(N);
    double acc = 0.0;
    for (double v : column) acc += (v - mean) * (v - mean);
    sd[l] = std::sqrt(acc / static_cast<double>(N - 1));
  }
  return sd;
}

MotionReport detect_motion(const std::vector<double>& sd, const DetectorConfig& cfg) {
  cfg.validate();
  const long L = static_cast<long>(sd.size());
  require(L >= 2L * cfg.guard_cells + 3, "detect_motion: vector too short for guard window");

  const long peak =
      std::distance(sd.begin(), std::max_element(sd.begin(), sd.end()));

  double floor_sum = 0.0;
  long floor_count = 0;
  for (long l = 0; l < L; ++l) {
    if (std::labs(l - peak) <= cfg.guard_cells) continue;
    floor_sum += sd[static_cast<std::size_t>(l)];
    ++floor_count;
  }
  const double th_motion = floor_count > 0 ? floor_sum / static_cast<double>(floor_count) : 0.0;

  MotionReport report;
  report.peak_bin = static_cast<int>(peak);
  report.sd_vector = sd;
  report.threshold = cfg.coef * th_motion;

  long over = 0;
  for (double v : sd)
    if (v > report.threshold) ++over;
  report.detected =
      sd[static_cast<std::size_t>(peak)] > report.threshold && over >= cfg.min_cells_over;
  return report;
}

FrameMatrix preprocess(const FrameMatrix& frames, const PreprocessOptions& opts) {
  FrameMatrix out = frames;
  if (opts.phase_correct) out = correct_phase(out);
  if (opts.filter) out = cascade_filter(out);
  if (opts.background) out = background_subtract(out, opts.background_lambda);
  return out;
}

}  // namespace uwbhar::dsp
