// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace uwbhar {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void check_keys(const json& obj, const std::string& section, std::set<std::string> allowed) {
  if (!obj.is_object()) bad("section '" + section + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) bad("unknown key '" + section + "." + it.key() + "'");
}

template <typename T>
void get(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      bad(std::string("bad value for key '") + key + "'");
    }
  }
}

void parse_radio(const json& j, sim::RadioConfig& r) {
  check_keys(j, "radio",
             {"carrier_freq_hz", "bandwidth_hz", "pulse_amplitude", "pulse_duration_s",
              "pulse_repetition_hz", "adc_interval_s", "fast_time_bins",
              "propagation_speed_mps"});
  get(j, "carrier_freq_hz", r.carrier_freq_hz);
  get(j, "bandwidth_hz", r.bandwidth_hz);
  get(j, "pulse_amplitude", r.pulse_amplitude);
  get(j, "pulse_duration_s", r.pulse_duration_s);
  get(j, "pulse_repetition_hz", r.pulse_repetition_hz);
  get(j, "adc_interval_s", r.adc_interval_s);
  get(j, "fast_time_bins", r.fast_time_bins);
  get(j, "propagation_speed_mps", r.propagation_speed_mps);
}

void parse_detector(const json& j, dsp::DetectorConfig& d) {
  check_keys(j, "detector", {"coef", "guard_cells", "min_cells_over", "window_frames"});
  get(j, "coef", d.coef);
  get(j, "guard_cells", d.guard_cells);
  get(j, "min_cells_over", d.min_cells_over);
  get(j, "window_frames", d.window_frames);
}

void parse_net(const json& j, nn::NetworkSpec& n) {
  check_keys(j, "net", {"kernel", "dilation", "groups", "widths", "head_hidden", "mode"});
  int kernel = 3, dilation = 2, groups = 4;
  std::vector<int> widths = {16, 32, 64};
  get(j, "kernel", kernel);
  get(j, "dilation", dilation);
  get(j, "groups", groups);
  get(j, "widths", widths);
  get(j, "head_hidden", n.head_hidden);
  if (widths.size() != 3) bad("net.widths must list 3 block widths");

  std::string mode = "fused";
  get(j, "mode", mode);
  if (mode == "fused")
    n.mode = nn::BranchMode::Fused;
  else if (mode == "time_only")
    n.mode = nn::BranchMode::TimeOnly;
  else if (mode == "freq_only")
    n.mode = nn::BranchMode::FreqOnly;
  else
    bad("net.mode must be fused|time_only|freq_only");

  n.time_branch.clear();
  int in_ch = 1;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    nn::BlockSpec b;
    b.kernel = kernel;
    b.dilation = dilation;
    b.stride = 2;
    b.reduce_groups = i == 0 ? 1 : groups;
    b.channels_in = in_ch;
    b.channels_mid = widths[i];
    b.channels_out = widths[i];
    in_ch = widths[i];
    n.time_branch.push_back(b);
  }
  n.freq_branch = n.time_branch;
}

void parse_train(const json& j, nn::TrainConfig& t) {
  check_keys(j, "train",
             {"learning_rate", "momentum", "batch_size", "epochs", "shuffle_seed", "verbose"});
  get(j, "learning_rate", t.learning_rate);
  get(j, "momentum", t.momentum);
  get(j, "batch_size", t.batch_size);
  get(j, "epochs", t.epochs);
  get(j, "shuffle_seed", t.shuffle_seed);
  get(j, "verbose", t.verbose);
}

void parse_dataset(const json& j, harness::DatasetConfig& d) {
  check_keys(j, "dataset",
             {"train_environments", "test_environments", "samples_per_class_per_env", "seed",
              "duration_s"});
  get(j, "train_environments", d.train_environments);
  get(j, "test_environments", d.test_environments);
  get(j, "samples_per_class_per_env", d.samples_per_class_per_env);
  get(j, "seed", d.seed);
  get(j, "duration_s", d.duration_s);
}

void parse_scene(const json& j, SceneConfig& s) {
  check_keys(j, "scene", {"environment", "activity", "range_m", "duration_s", "seed"});
  get(j, "environment", s.environment);
  get(j, "activity", s.activity);
  get(j, "range_m", s.range_m);
  get(j, "duration_s", s.duration_s);
  get(j, "seed", s.seed);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "",
             {"radio", "detector", "net", "train", "dataset", "scene", "bench_runs"});

  RunConfig cfg;
  cfg.net = nn::NetworkSpec::defaults();
  if (j.contains("radio")) parse_radio(j["radio"], cfg.radio);
  if (j.contains("detector")) parse_detector(j["detector"], cfg.detector);
  if (j.contains("net")) parse_net(j["net"], cfg.net);
  if (j.contains("train")) parse_train(j["train"], cfg.train);
  if (j.contains("dataset")) parse_dataset(j["dataset"], cfg.dataset);
  if (j.contains("scene")) parse_scene(j["scene"], cfg.scene);
  get(j, "bench_runs", cfg.bench_runs);
  cfg.dataset.radio = cfg.radio;
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void RunConfig::validate() const {
  radio.validate();
  detector.validate();
  net.validate();
  dataset.validate();
  if (bench_runs < 1) bad("bench_runs must be >= 1");
  if (scene.duration_s <= 0) bad("scene.duration_s must be positive");
  if (scene.range_m <= 0) bad("scene.range_m must be positive");
  if (scene.environment < 0 || scene.environment >= harness::kNumEnvironments)
    bad("scene.environment out of range");
  if (scene.activity != "none") {
    const auto& names = harness::class_names();
    bool found = false;
    for (const std::string& n : names) found = found || n == scene.activity;
    if (!found) bad("scene.activity must be a class name or 'none'");
  }
}

}  // namespace uwbhar
