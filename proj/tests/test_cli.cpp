// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line pipeline, driving the built binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uwbhar/io.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCli = UWBHAR_CLI_PATH;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args, const fs::path& capture) {
  const std::string cmd = std::string(kCli) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("uwbhar_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string dir(const std::string& name) const { return (path / name).string(); }
};

std::string file_bytes(const std::string& p) { return uwbhar::io::read_text_file(p); }

}  // namespace

TEST_CASE("params prints the table and totals") {
  TempDir tmp("params");
  const RunResult r = run("params", tmp.path / "log");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("head.fc2") != std::string::npos);
  CHECK(r.out.find("param_count=") != std::string::npos);
  CHECK(r.out.find("flop_count=") != std::string::npos);
}

TEST_CASE("invalid config key exits with code 2") {
  TempDir tmp("badcfg");
  uwbhar::io::write_text_file(tmp.dir("bad.json"), "{\"radio\": {\"bogus_key\": 1}}");
  const RunResult r = run("--config " + tmp.dir("bad.json") + " params", tmp.path / "log");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("error:") != std::string::npos);
  CHECK(r.out.find("bogus_key") != std::string::npos);
}

TEST_CASE("simulate then preprocess then detect emits a detection line") {
  TempDir tmp("detect");
  CHECK(run("--out " + tmp.dir("a") + " --seed 5 simulate", tmp.path / "l1").exit_code == 0);
  CHECK(run("--out " + tmp.dir("a") + " preprocess --in " + tmp.dir("a") + "/scene.uwbf",
            tmp.path / "l2")
            .exit_code == 0);
  const RunResult det = run("--out " + tmp.dir("a") + " detect --in " + tmp.dir("a")
                                + "/scene.proc.uwbf",
                            tmp.path / "l3");
  CHECK(det.exit_code == 0);
  // window_start, detected, peak_bin, peak_sd, threshold
  CHECK(det.out.rfind("0,1,", 0) == 0);
  CHECK(fs::exists(tmp.dir("a") + "/detections.csv"));
}

TEST_CASE("simulate is rerunnable byte-identically under a fixed seed") {
  TempDir tmp("idem");
  CHECK(run("--out " + tmp.dir("x") + " --seed 11 simulate", tmp.path / "l1").exit_code == 0);
  CHECK(run("--out " + tmp.dir("y") + " --seed 11 simulate", tmp.path / "l2").exit_code == 0);
  CHECK(file_bytes(tmp.dir("x") + "/scene.uwbf") == file_bytes(tmp.dir("y") + "/scene.uwbf"));

  CHECK(run("--out " + tmp.dir("z") + " --seed 12 simulate", tmp.path / "l3").exit_code == 0);
  CHECK(file_bytes(tmp.dir("x") + "/scene.uwbf") != file_bytes(tmp.dir("z") + "/scene.uwbf"));
}

TEST_CASE("full pipeline: dataset, features, training, evaluation, inference") {
  TempDir tmp("full");
  const std::string cfg = tmp.dir("cfg.json");
  uwbhar::io::write_text_file(cfg, R"({
    "dataset": {"samples_per_class_per_env": 1},
    "train": {"epochs": 2, "batch_size": 8}
  })");
  const std::string base = "--config " + cfg + " --threads 2 --out " + tmp.dir("w");

  CHECK(run(base + " simulate --dataset", tmp.path / "l1").exit_code == 0);
  REQUIRE(fs::exists(tmp.dir("w") + "/manifest.csv"));
  CHECK(run(base + " preprocess --manifest " + tmp.dir("w") + "/manifest.csv", tmp.path / "l2")
            .exit_code == 0);
  CHECK(run(base + " featurize --manifest " + tmp.dir("w") + "/manifest.csv", tmp.path / "l3")
            .exit_code == 0);
  REQUIRE(fs::exists(tmp.dir("w") + "/features.csv"));
  CHECK(run(base + " train --manifest " + tmp.dir("w") + "/features.csv", tmp.path / "l4")
            .exit_code == 0);
  REQUIRE(fs::exists(tmp.dir("w") + "/weights.sanw"));
  CHECK(fs::exists(tmp.dir("w") + "/train_log.csv"));

  const RunResult ev = run(base + " eval --manifest " + tmp.dir("w")
                               + "/features.csv --weights " + tmp.dir("w") + "/weights.sanw",
                           tmp.path / "l5");
  CHECK(ev.exit_code == 0);
  CHECK(ev.out.find("accuracy") != std::string::npos);
  CHECK(fs::exists(tmp.dir("w") + "/metrics.json"));
  CHECK(fs::exists(tmp.dir("w") + "/confusion.csv"));

  const RunResult inf = run(base + " infer --weights " + tmp.dir("w")
                                + "/weights.sanw --frames " + tmp.dir("w")
                                + "/frames/test_e2_c6_0000.uwbf",
                            tmp.path / "l6");
  CHECK(inf.exit_code == 0);
  CHECK(inf.out.rfind("predicted=", 0) == 0);
}

TEST_CASE("bench reports latency statistics") {
  TempDir tmp("bench");
  const RunResult r = run("bench --runs 20", tmp.path / "log");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("median_ms=") != std::string::npos);
  CHECK(r.out.find("p95_over_median=") != std::string::npos);
}
