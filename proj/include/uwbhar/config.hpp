// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "uwbhar/dataset.hpp"
#include "uwbhar/dsp.hpp"
#include "uwbhar/net.hpp"
#include "uwbhar/sim.hpp"
#include "uwbhar/train.hpp"

namespace uwbhar {

// Scripted scene for the simulate/detect stages.
struct SceneConfig {
  int environment = 0;
  std::string activity = "walking";  // one of the 7 class names, or "none"
  double range_m = 2.0;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
};

// Whole-pipeline configuration, parsed strictly: unknown keys are rejected.
struct RunConfig {
  sim::RadioConfig radio;
  dsp::DetectorConfig detector;
  nn::NetworkSpec net = nn::NetworkSpec::defaults();
  nn::TrainConfig train;
  harness::DatasetConfig dataset;
  SceneConfig scene;
  int bench_runs = 1000;

  // Throws std::invalid_argument with a one-line message on any problem.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  void validate() const;
};

}  // namespace uwbhar
