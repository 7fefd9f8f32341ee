// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uwbhar/sim.hpp"

namespace uwbhar::dsp {

using sim::cplx;
using sim::FrameMatrix;

// Peak-average detector parameters. th_motion is the mean of all
// standard-deviation cells outside the +/- guard_cells neighborhood of the
// peak; a motion is declared when the peak exceeds coef * th_motion.
struct DetectorConfig {
  double coef = 1.5;
  int guard_cells = 3;
  int min_cells_over = 1;
  int window_frames = 400;  // N for the standard-deviation window

  void validate() const;
};

struct MotionReport {
  bool detected = false;
  int peak_bin = 0;
  std::vector<double> sd_vector;
  double threshold = 0.0;  // coef * noise floor
};

// Removes the per-frame common phase jitter. The fast-time bin with maximum
// mean amplitude serves as the static reference; every frame is rotated so
// the reference bin sits at the mean phase of that bin across all frames.
FrameMatrix correct_phase(const FrameMatrix& frames);

inline constexpr int kFirTaps = 26;
inline constexpr double kFirCutoffHz = 80.0;

// Hamming-windowed sinc taps, DC gain normalized to 1.
std::vector<double> fir_lowpass_taps(int taps, double cutoff_hz, double sample_rate_hz);

// Same-length FIR filtering with zero-padded edges (taps default to the
// 26-tap design at the 400 Hz slow-time rate).
std::vector<double> fir_lowpass(const std::vector<double>& signal,
                                const std::vector<double>& taps = {});
std::vector<cplx> fir_lowpass(const std::vector<cplx>& signal,
                              const std::vector<double>& taps = {});

// Centered 5-point moving average; edge windows shrink.
std::vector<double> smooth(const std::vector<double>& signal);
std::vector<cplx> smooth(const std::vector<cplx>& signal);

// FIR low-pass followed by the 5-point smoother, applied along slow time
// independently per fast-time bin.
FrameMatrix cascade_filter(const FrameMatrix& frames);

// Subtracts a per-bin running mean with exponential forgetting. The mean is
// seeded with the first frame, so purely static scenes cancel exactly.
FrameMatrix background_subtract(const FrameMatrix& frames, double forgetting = 0.95);

// Steady-state magnitude response of the background subtractor,
// |1 - e^{-jw}| / |1 - lambda e^{-jw}| at frequency_hz.
double background_subtract_response(double frequency_hz, double sample_rate_hz,
                                    double forgetting = 0.95);

// Per-bin standard deviation of sample magnitudes over the last
// cfg.window_frames frames (N-1 in the denominator).
std::vector<double> fast_time_std(const FrameMatrix& frames, const DetectorConfig& cfg);

MotionReport detect_motion(const std::vector<double>& sd, const DetectorConfig& cfg);

struct PreprocessOptions {
  bool phase_correct = true;
  bool filter = true;
  bool background = true;
  double background_lambda = 0.95;
};

// The full chain in pipeline order: phase correct, cascade filter,
// background subtract.
FrameMatrix preprocess(const FrameMatrix& frames, const PreprocessOptions& opts = {});

}  // namespace uwbhar::dsp
