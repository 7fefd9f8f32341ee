// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uwbhar/dsp.hpp"
#include "uwbhar/metrics.hpp"
#include "uwbhar/sim.hpp"
#include "uwbhar/train.hpp"

namespace uwbhar::harness {

// The seven activity classes.
enum class Activity : int {
  Bending = 0,
  Falling = 1,
  LyingDown = 2,
  StandingUp = 3,
  SittingDown = 4,
  SquattingDown = 5,
  Walking = 6,
};
const std::vector<std::string>& class_names();

// A simulated room: static clutter layout plus noise statistics.
struct EnvironmentSpec {
  int id = 0;
  std::vector<sim::PathModel> clutter;
  double awgn_variance = 1e-4;
  double phase_jitter_std_rad = 0.1;
};
EnvironmentSpec environment(int id);  // ids 0..6
inline constexpr int kNumEnvironments = 7;

// Scripted kinematics for one activity instance. variation_seed perturbs
// speeds, durations and micro motion so samples are not clones.
sim::MotionProfile activity_profile(Activity activity, double start_range_m,
                                    std::uint64_t variation_seed);

struct DatasetConfig {
  std::vector<int> train_environments = {0, 1};
  std::vector<int> test_environments = {2};
  int samples_per_class_per_env = 50;
  std::uint64_t seed = 7;
  sim::RadioConfig radio;
  double duration_s = 1.0;
  int threads = 0;

  void validate() const;  // split environments must be disjoint
};

struct Dataset {
  std::vector<nn::TrainSample> train;
  std::vector<nn::TrainSample> test;
};

// One planned sample: everything needed to synthesize it reproducibly.
struct SamplePlanEntry {
  std::string split;  // "train" | "test"
  int environment = 0;
  int label = 0;
  int index = 0;
  std::uint64_t seed = 0;
  double start_range_m = 2.0;
};

// The deterministic sample list for a config; the in-memory generator and
// the file-based CLI pipeline both follow it.
std::vector<SamplePlanEntry> dataset_plan(const DatasetConfig& config);

// Deterministic synthetic corpus: simulate -> preprocess -> featurize ->
// normalize, balanced over classes and environments.
Dataset generate_dataset(const DatasetConfig& config);

// Full pipeline + detector on one simulated window.
dsp::MotionReport detect_window(const sim::FrameMatrix& frames, const dsp::DetectorConfig& cfg);

// Builds one raw activity window (shared by generate_dataset and the CLI).
sim::FrameMatrix simulate_sample(const sim::RadioConfig& radio, const EnvironmentSpec& env,
                                 Activity activity, double start_range_m, double duration_s,
                                 std::uint64_t seed);

struct DetectorOperatingPoint {
  double tpr = 0.0;
  double far = 0.0;
  int motion_windows = 0;
  int noise_windows = 0;
};

// TPR over labeled motion windows and FAR over no-motion windows. Throws
// std::domain_error when either category is empty.
DetectorOperatingPoint eval_detector(const std::vector<sim::FrameMatrix>& motion_windows,
                                     const std::vector<sim::FrameMatrix>& noise_windows,
                                     const dsp::DetectorConfig& cfg);

struct AblationEntry {
  nn::BranchMode mode;
  MetricsReport report;
};

struct AblationConfig {
  DatasetConfig data;
  nn::NetworkSpec net;
  nn::TrainConfig train;
  std::uint64_t init_seed = 1;
};

// Trains time-only, freq-only and fused variants on identical data and
// seeds; returns one report per configuration.
std::vector<AblationEntry> ablation(const AblationConfig& config);

// Conversion helper: normalized spectrogram pair -> network sample.
nn::TrainSample to_sample(const sim::FrameMatrix& processed, int label, int environment);

}  // namespace uwbhar::harness
