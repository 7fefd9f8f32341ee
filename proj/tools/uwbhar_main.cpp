// SPDX-License-Identifier: Apache-2.0
//
// Single entry point for the pipeline:
//   simulate -> preprocess -> detect -> featurize -> train -> eval -> infer
// plus `bench` and `params` for efficiency accounting.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwbhar/accounting.hpp"
#include "uwbhar/config.hpp"
#include "uwbhar/dataset.hpp"
#include "uwbhar/dsp.hpp"
#include "uwbhar/features.hpp"
#include "uwbhar/io.hpp"
#include "uwbhar/kernels.hpp"
#include "uwbhar/metrics.hpp"
#include "uwbhar/parallel.hpp"
#include "uwbhar/sim.hpp"
#include "uwbhar/train.hpp"

namespace fs = std::filesystem;
using namespace uwbhar;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_dir = ".";
};

RunConfig load_config(const GlobalOpts& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::from_file(g.config_path);
  if (g.seed_set) {
    cfg.scene.seed = g.seed;
    cfg.dataset.seed = g.seed;
    cfg.train.shuffle_seed = g.seed;
  }
  cfg.dataset.threads = g.threads;
  cfg.dataset.radio = cfg.radio;
  return cfg;
}

fs::path out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

int label_index(const std::string& name) {
  const auto& names = harness::class_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown activity label: " + name);
}

sim::FrameMatrix simulate_scene(const RunConfig& cfg) {
  const harness::EnvironmentSpec env = harness::environment(cfg.scene.environment);
  if (cfg.scene.activity == "none") {
    sim::MotionProfile empty;
    empty.label = "none";
    empty.segments = {{cfg.scene.duration_s, {}}};
    sim::NoiseModel noise{env.awgn_variance, env.phase_jitter_std_rad, cfg.scene.seed};
    return sim::simulate_activity(cfg.radio, env.clutter, empty, noise, cfg.scene.duration_s);
  }
  return harness::simulate_sample(cfg.radio, env,
                                  static_cast<harness::Activity>(label_index(cfg.scene.activity)),
                                  cfg.scene.range_m, cfg.scene.duration_s, cfg.scene.seed);
}

// ------------------------------------------------------------------- stages

int cmd_simulate(const GlobalOpts& g, bool dataset_mode) {
  RunConfig cfg = load_config(g);
  if (!dataset_mode) {
    const sim::FrameMatrix frames = simulate_scene(cfg);
    const fs::path path = out_path(g, "scene.uwbf");
    io::write_frames(path.string(), frames);
    std::printf("wrote %s (%zu frames x %zu bins)\n", path.string().c_str(), frames.num_frames,
                frames.num_bins);
    return 0;
  }

  const auto plan = harness::dataset_plan(cfg.dataset);
  fs::create_directories(fs::path(g.out_dir) / "frames");
  std::vector<io::ManifestRow> rows(plan.size());
  parallel_for(plan.size(), g.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const harness::SamplePlanEntry& entry = plan[i];
      const sim::FrameMatrix frames = harness::simulate_sample(
          cfg.radio, harness::environment(entry.environment),
          static_cast<harness::Activity>(entry.label), entry.start_range_m,
          cfg.dataset.duration_s, entry.seed);
      char stem[128];
      std::snprintf(stem, sizeof(stem), "frames/%s_e%d_c%d_%04d", entry.split.c_str(),
                    entry.environment, entry.label, entry.index);
      io::write_frames((fs::path(g.out_dir) / (std::string(stem) + ".uwbf")).string(), frames);
      rows[i] = {stem, harness::class_names()[static_cast<std::size_t>(entry.label)],
                 entry.environment, entry.split};
    }
  });
  io::write_manifest(out_path(g, "manifest.csv").string(), rows);
  std::printf("wrote %zu samples under %s\n", plan.size(), g.out_dir.c_str());
  return 0;
}

int cmd_preprocess(const GlobalOpts& g, const std::string& in, const std::string& manifest) {
  RunConfig cfg = load_config(g);
  (void)cfg;
  auto process_one = [&](const std::string& src, const std::string& dst) {
    const sim::FrameMatrix frames = io::read_frames(src);
    io::write_frames(dst, dsp::preprocess(frames));
  };
  if (!manifest.empty()) {
    const auto rows = io::read_manifest(manifest);
    const fs::path base = fs::path(manifest).parent_path();
    parallel_for(rows.size(), g.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const fs::path stem = base / rows[i].stem;
        process_one(stem.string() + ".uwbf", stem.string() + ".proc.uwbf");
      }
    });
    std::printf("preprocessed %zu files\n", rows.size());
    return 0;
  }
  if (in.empty()) throw std::invalid_argument("preprocess: need --in or --manifest");
  const fs::path dst = out_path(g, fs::path(in).stem().string() + ".proc.uwbf");
  process_one(in, dst.string());
  std::printf("wrote %s\n", dst.string().c_str());
  return 0;
}

int cmd_detect(const GlobalOpts& g, const std::string& in, bool raw) {
  RunConfig cfg = load_config(g);
  const sim::FrameMatrix frames = io::read_frames(in);
  const int window = cfg.detector.window_frames;
  if (frames.num_frames < static_cast<std::size_t>(window))
    throw std::invalid_argument("detect: input shorter than one detector window");

  std::string csv;
  for (std::size_t start = 0; start + window <= frames.num_frames;
       start += static_cast<std::size_t>(window)) {
    sim::FrameMatrix slice;
    slice.num_frames = static_cast<std::size_t>(window);
    slice.num_bins = frames.num_bins;
    slice.radio = frames.radio;
    slice.frame_period_s = frames.frame_period_s;
    slice.data.assign(frames.row(start), frames.row(start) + window * frames.num_bins);

    const dsp::MotionReport report =
        raw ? harness::detect_window(slice, cfg.detector)
            : dsp::detect_motion(dsp::fast_time_std(slice, cfg.detector), cfg.detector);
    char line[160];
    std::snprintf(line, sizeof(line), "%zu,%d,%d,%.6g,%.6g\n", start, report.detected ? 1 : 0,
                  report.peak_bin, report.sd_vector[static_cast<std::size_t>(report.peak_bin)],
                  report.threshold);
    std::fputs(line, stdout);
    csv += line;
  }
  io::write_text_file(out_path(g, "detections.csv").string(), csv);
  return 0;
}

int cmd_featurize(const GlobalOpts& g, const std::string& manifest) {
  RunConfig cfg = load_config(g);
  const auto rows = io::read_manifest(manifest);
  const fs::path base = fs::path(manifest).parent_path();
  parallel_for(rows.size(), g.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const fs::path stem = base / rows[i].stem;
      const sim::FrameMatrix frames = io::read_frames(stem.string() + ".proc.uwbf");
      const auto t = features::normalize(features::time_spectrogram(frames));
      const auto f = features::normalize(features::doppler_spectrogram(frames));
      io::write_spectrogram(stem.string() + ".time.spec", t, cfg.radio, frames.frame_period_s);
      io::write_spectrogram(stem.string() + ".dopp.spec", f, cfg.radio, frames.frame_period_s);
    }
  });
  io::write_manifest(out_path(g, "features.csv").string(), rows);
  std::printf("featurized %zu samples\n", rows.size());
  return 0;
}

std::vector<nn::TrainSample> load_samples(const std::string& manifest, const std::string& split) {
  const auto rows = io::read_manifest(manifest);
  const fs::path base = fs::path(manifest).parent_path();
  std::vector<nn::TrainSample> samples;
  for (const auto& row : rows) {
    if (row.split != split) continue;
    const fs::path stem = base / row.stem;
    const auto t = io::read_spectrogram(stem.string() + ".time.spec");
    const auto f = io::read_spectrogram(stem.string() + ".dopp.spec");
    nn::TrainSample s;
    s.label = label_index(row.label);
    s.environment = row.environment;
    s.time = nn::Tensor<float>({t.rows, t.cols, 1});
    s.freq = nn::Tensor<float>({f.rows, f.cols, 1});
    for (std::size_t i = 0; i < t.data.size(); ++i) s.time.data[i] = static_cast<float>(t.data[i]);
    for (std::size_t i = 0; i < f.data.size(); ++i) s.freq.data[i] = static_cast<float>(f.data[i]);
    samples.push_back(std::move(s));
  }
  if (samples.empty())
    throw std::invalid_argument("no samples with split=" + split + " in " + manifest);
  return samples;
}

int cmd_train(const GlobalOpts& g, const std::string& manifest) {
  RunConfig cfg = load_config(g);
  auto samples = load_samples(manifest, "train");
  nn::Network<float> net(cfg.net, features::kWindowFrames, features::kFastTimeBins,
                         cfg.dataset.seed);
  nn::TrainConfig tc = cfg.train;
  tc.threads = g.threads;
  const auto history = nn::train(net, samples, tc);

  io::save_weights(out_path(g, "weights.sanw").string(), net);
  std::string log = "epoch,mean_loss\n";
  for (std::size_t e = 0; e < history.size(); ++e)
    log += std::to_string(e + 1) + "," + std::to_string(history[e].mean_loss) + "\n";
  io::write_text_file(out_path(g, "train_log.csv").string(), log);
  std::printf("trained %zu samples, %d epochs, final loss %.4f -> %s\n", samples.size(),
              cfg.train.epochs, history.back().mean_loss,
              out_path(g, "weights.sanw").string().c_str());
  return 0;
}

int cmd_eval(const GlobalOpts& g, const std::string& manifest, const std::string& weights) {
  RunConfig cfg = load_config(g);
  auto samples = load_samples(manifest, "test");
  nn::Network<float> net(cfg.net, features::kWindowFrames, features::kFastTimeBins, 0);
  io::load_weights(weights, net);
  const harness::MetricsReport report = harness::evaluate(net, samples);

  const std::string table = harness::format_metrics(report, harness::class_names());
  io::write_text_file(out_path(g, "metrics.txt").string(), table);
  io::write_text_file(out_path(g, "metrics.json").string(),
                      harness::metrics_to_json(report, harness::class_names()));
  io::write_text_file(out_path(g, "confusion.csv").string(), harness::confusion_to_csv(report));
  std::fputs(table.c_str(), stdout);
  return 0;
}

int cmd_infer(const GlobalOpts& g, const std::string& weights, const std::string& frames_path) {
  RunConfig cfg = load_config(g);
  sim::FrameMatrix frames = io::read_frames(frames_path);
  if (frames.num_frames < features::kWindowFrames)
    throw std::invalid_argument("infer: need at least 400 frames");
  sim::FrameMatrix window;
  window.num_frames = features::kWindowFrames;
  window.num_bins = frames.num_bins;
  window.radio = frames.radio;
  window.frame_period_s = frames.frame_period_s;
  window.data.assign(frames.data.begin(),
                     frames.data.begin() + features::kWindowFrames * frames.num_bins);

  const sim::FrameMatrix processed = dsp::preprocess(window);
  const nn::TrainSample s = harness::to_sample(processed, 0, 0);

  nn::Network<float> net(cfg.net, features::kWindowFrames, features::kFastTimeBins, 0);
  io::load_weights(weights, net);
  const std::vector<float> probs = net.forward(s.time, s.freq);
  const int pred = static_cast<int>(
      std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));

  std::printf("predicted=%s", harness::class_names()[static_cast<std::size_t>(pred)].c_str());
  std::printf(" probs=");
  for (std::size_t i = 0; i < probs.size(); ++i)
    std::printf("%s%.4f", i ? "," : "", static_cast<double>(probs[i]));
  std::printf("\n");
  return 0;
}

int cmd_bench(const GlobalOpts& g, int runs_override, const std::string& weights) {
  RunConfig cfg = load_config(g);
  const int runs = runs_override > 0 ? runs_override : cfg.bench_runs;

  nn::Network<float> net(cfg.net, features::kWindowFrames, features::kFastTimeBins,
                         g.seed_set ? g.seed : 1);
  if (!weights.empty()) io::load_weights(weights, net);

  std::mt19937_64 rng(42);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  nn::Tensor<float> t({features::kWindowFrames, features::kFastTimeBins, 1});
  nn::Tensor<float> f(t.shape);
  for (auto& v : t.data) v = gauss(rng);
  for (auto& v : f.data) v = gauss(rng);

  net.forward(t, f);  // warm up
  std::vector<double> ms(static_cast<std::size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    net.forward(t, f);
    const auto t1 = std::chrono::steady_clock::now();
    ms[static_cast<std::size_t>(i)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  std::sort(ms.begin(), ms.end());
  const double min = ms.front();
  const double median = ms[ms.size() / 2];
  const double p95 = ms[static_cast<std::size_t>(0.95 * (ms.size() - 1))];
  std::printf("bench runs=%d kernels=%s min_ms=%.3f median_ms=%.3f p95_ms=%.3f "
              "p95_over_median=%.3f\n",
              runs, kern::ops().name, min, median, p95, p95 / median);
  return 0;
}

int cmd_params(const GlobalOpts& g) {
  RunConfig cfg = load_config(g);
  nn::Network<float> net(cfg.net, features::kWindowFrames, features::kFastTimeBins, 0);
  std::fputs(nn::format_layer_table(net.layer_table()).c_str(), stdout);
  std::printf("param_count=%zu flop_count=%lld\n", net.param_count(), net.flop_count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UWB impulse-radar human activity recognition pipeline"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  auto* seed_opt = app.add_option("--seed", g.seed, "override stage seeds");
  app.add_option("--threads", g.threads, "worker threads (0 = auto)");
  app.add_option("--out", g.out_dir, "output directory");

  auto* sim_cmd = app.add_subcommand("simulate", "synthesize a scene or a whole dataset");
  bool dataset_mode = false;
  sim_cmd->add_flag("--dataset", dataset_mode, "generate the configured dataset");

  auto* pre_cmd = app.add_subcommand("preprocess", "phase-correct, filter, background-subtract");
  std::string pre_in, pre_manifest;
  pre_cmd->add_option("--in", pre_in, "one frame container");
  pre_cmd->add_option("--manifest", pre_manifest, "dataset manifest");

  auto* det_cmd = app.add_subcommand("detect", "motion detection per window");
  std::string det_in;
  bool det_raw = false;
  det_cmd->add_option("--in", det_in, "frame container")->required();
  det_cmd->add_flag("--raw", det_raw, "input is raw (run preprocessing first)");

  auto* feat_cmd = app.add_subcommand("featurize", "write time/Doppler spectrogram pairs");
  std::string feat_manifest;
  feat_cmd->add_option("--manifest", feat_manifest, "dataset manifest")->required();

  auto* train_cmd = app.add_subcommand("train", "train the two-branch network");
  std::string train_manifest;
  train_cmd->add_option("--manifest", train_manifest, "feature manifest")->required();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate on the held-out split");
  std::string eval_manifest, eval_weights;
  eval_cmd->add_option("--manifest", eval_manifest, "feature manifest")->required();
  eval_cmd->add_option("--weights", eval_weights, "weights file")->required();

  auto* infer_cmd = app.add_subcommand("infer", "classify one frame container");
  std::string infer_weights, infer_frames;
  infer_cmd->add_option("--weights", infer_weights, "weights file")->required();
  infer_cmd->add_option("--frames", infer_frames, "raw frame container")->required();

  auto* bench_cmd = app.add_subcommand("bench", "per-inference latency statistics");
  int bench_runs = 0;
  std::string bench_weights;
  bench_cmd->add_option("--runs", bench_runs, "override configured run count");
  bench_cmd->add_option("--weights", bench_weights, "weights file (optional)");

  app.add_subcommand("params", "per-layer parameter and FLOP table");

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(g, dataset_mode);
    if (app.got_subcommand("preprocess")) return cmd_preprocess(g, pre_in, pre_manifest);
    if (app.got_subcommand("detect")) return cmd_detect(g, det_in, det_raw);
    if (app.got_subcommand("featurize")) return cmd_featurize(g, feat_manifest);
    if (app.got_subcommand("train")) return cmd_train(g, train_manifest);
    if (app.got_subcommand("eval")) return cmd_eval(g, eval_manifest, eval_weights);
    if (app.got_subcommand("infer")) return cmd_infer(g, infer_weights, infer_frames);
    if (app.got_subcommand("bench")) return cmd_bench(g, bench_runs, bench_weights);
    if (app.got_subcommand("params")) return cmd_params(g);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
