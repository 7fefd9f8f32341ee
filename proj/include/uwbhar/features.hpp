// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uwbhar/sim.hpp"

namespace uwbhar::features {

using sim::FrameMatrix;

inline constexpr int kWindowFrames = 400;
inline constexpr int kFastTimeBins = 60;

enum class SpectrogramKind { TimeDomain, DopplerDomain };
enum class Normalization { None, ZScore };

// Real-valued window_frames x fast_time_bins image fed to one CNN branch.
struct Spectrogram {
  std::vector<double> data;  // row-major [rows x cols]
  int rows = kWindowFrames;
  int cols = kFastTimeBins;
  SpectrogramKind kind = SpectrogramKind::TimeDomain;
  Normalization normalization = Normalization::None;

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  void validate() const;
};

// Magnitude of each baseband sample: entry (k, l) = |y_k(l)|.
Spectrogram time_spectrogram(const FrameMatrix& window);

// Per fast-time bin, the window_frames-point DFT along slow time; entry
// (q, l) = log(1 + |X_q|) with zero frequency in row 0 (no shift).
Spectrogram doppler_spectrogram(const FrameMatrix& window);

// Whole-matrix z-score; a zero-variance input maps to all zeros.
Spectrogram normalize(const Spectrogram& s);

}  // namespace uwbhar::features
