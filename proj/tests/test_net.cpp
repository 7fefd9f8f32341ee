// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.hpp"
#include "uwbhar/accounting.hpp"
#include "uwbhar/net.hpp"

using namespace uwbhar::nn;
using testutil::random_tensor;

namespace {

NetworkSpec small_spec() {
  NetworkSpec spec;
  spec.time_branch = {
      {1, 3, 2, 2, 1, 8, 8},
      {2, 3, 2, 2, 8, 16, 16},
      {2, 3, 2, 2, 16, 16, 16},
  };
  spec.freq_branch = spec.time_branch;
  spec.head_hidden = 16;
  return spec;
}

}  // namespace

TEST_CASE("forward: probabilities sum to one for random weights") {
  auto gen = testutil::rng(1);
  Network<double> net(small_spec(), 16, 12, 7);
  const auto t = random_tensor<double>({16, 12, 1}, gen);
  const auto f = random_tensor<double>({16, 12, 1}, gen);
  const auto probs = net.forward(t, f);
  REQUIRE(probs.size() == 7);
  double sum = 0.0;
  for (double p : probs) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identical branch weights and inputs give identical pre-fusion features") {
  auto gen = testutil::rng(2);
  Network<double> net(small_spec(), 16, 12, 8);
  auto views = net.views();
  REQUIRE(views.size() == 2 * 12 + 4);  // 4 weighted layers per block, 3 blocks per branch
  for (std::size_t i = 0; i < 12; ++i)
    std::copy(views[i].w, views[i].w + views[i].n, views[12 + i].w);

  const auto x = random_tensor<double>({16, 12, 1}, gen);
  net.forward(x, x);
  REQUIRE(net.time_features().size() == net.freq_features().size());
  for (std::size_t i = 0; i < net.time_features().size(); ++i)
    CHECK(net.time_features()[i] == doctest::Approx(net.freq_features()[i]).epsilon(1e-12));
}

TEST_CASE("permuting class-head rows permutes the output probabilities") {
  auto gen = testutil::rng(3);
  Network<double> net(small_spec(), 16, 12, 9);
  const auto t = random_tensor<double>({16, 12, 1}, gen);
  const auto f = random_tensor<double>({16, 12, 1}, gen);
  const auto before = net.forward(t, f);

  const std::vector<int> perm = {3, 0, 6, 1, 5, 2, 4};
  auto views = net.views();
  auto& fc2_w = views[views.size() - 2];  // [hidden, classes]
  auto& fc2_b = views[views.size() - 1];  // [classes]
  const int hidden = net.spec().head_hidden;
  std::vector<double> w_copy(fc2_w.w, fc2_w.w + fc2_w.n);
  std::vector<double> b_copy(fc2_b.w, fc2_b.w + fc2_b.n);
  for (int h = 0; h < hidden; ++h)
    for (int c = 0; c < 7; ++c)
      fc2_w.w[h * 7 + perm[static_cast<std::size_t>(c)]] = w_copy[static_cast<std::size_t>(h * 7 + c)];
  for (int c = 0; c < 7; ++c)
    fc2_b.w[perm[static_cast<std::size_t>(c)]] = b_copy[static_cast<std::size_t>(c)];

  const auto after = net.forward(t, f);
  for (int c = 0; c < 7; ++c)
    CHECK(after[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] ==
          doctest::Approx(before[static_cast<std::size_t>(c)]).epsilon(1e-12));
}

TEST_CASE("all-zero weights give zero features and uniform probabilities") {
  Network<double> net(small_spec(), 16, 12, 10);
  for (auto& v : net.views()) std::fill(v.w, v.w + v.n, 0.0);
  auto gen = testutil::rng(4);
  const auto x = random_tensor<double>({16, 12, 1}, gen);
  const auto probs = net.forward(x, x);
  for (double v : net.time_features()) CHECK(v == 0.0);
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("block parameter count follows the component formulas") {
  const NetworkSpec spec = small_spec();
  Network<double> net(spec, 16, 12, 11);
  auto views = net.views();

  std::size_t view_idx = 0;
  for (const BlockSpec& b : spec.time_branch) {
    const std::size_t expected =
        gconv_params(1, b.channels_in, b.channels_mid, b.reduce_groups) +
        dconv_params(b.kernel, b.channels_mid / 2) +
        pconv_params(b.channels_mid / 2, b.channels_mid / 2) +
        pconv_params(b.channels_mid, b.channels_out);
    std::size_t enumerated = 0;
    for (int i = 0; i < 4; ++i) enumerated += views[view_idx++].n;
    CHECK(enumerated == expected);
  }
}

TEST_CASE("param_count equals the flattened weight vector length") {
  Network<float> net(small_spec(), 16, 12, 12);
  CHECK(net.param_count() == net.flat_weights().size());
  std::size_t from_views = 0;
  for (const auto& v : net.views()) from_views += v.n;
  CHECK(net.param_count() == from_views);
  CHECK(net.flop_count() > 0);
}

TEST_CASE("output shape is dilation-invariant under same padding") {
  for (int d : {1, 2, 3}) {
    NetworkSpec spec = small_spec();
    for (auto& b : spec.time_branch) b.dilation = d;
    for (auto& b : spec.freq_branch) b.dilation = d;
    Network<double> net(spec, 32, 24, 13);
    auto gen = testutil::rng(100 + static_cast<std::uint64_t>(d));
    const auto x = random_tensor<double>({32, 24, 1}, gen);
    const auto probs = net.forward(x, x);
    CHECK(probs.size() == 7);
    // flatten size, and therefore the head, is unchanged by dilation
    CHECK(net.param_count() == Network<double>(small_spec(), 32, 24, 13).param_count());
  }
}

TEST_CASE("spec validation rejects malformed networks") {
  NetworkSpec two_blocks = small_spec();
  two_blocks.time_branch.pop_back();
  CHECK_THROWS_AS(two_blocks.validate(), std::invalid_argument);

  NetworkSpec bad_classes = small_spec();
  bad_classes.num_classes = 5;
  CHECK_THROWS_AS(bad_classes.validate(), std::invalid_argument);

  NetworkSpec odd_mid = small_spec();
  odd_mid.time_branch[0].channels_mid = 7;
  CHECK_THROWS_AS(odd_mid.validate(), std::invalid_argument);

  NetworkSpec bad_groups = small_spec();
  bad_groups.time_branch[1].reduce_groups = 3;  // 8 and 16 not divisible by 3
  CHECK_THROWS_AS(bad_groups.validate(), std::invalid_argument);

  NetworkSpec broken_chain = small_spec();
  broken_chain.time_branch[2].channels_in = 5;
  CHECK_THROWS_AS(broken_chain.validate(), std::invalid_argument);
}

TEST_CASE("deterministic construction and forward for a fixed seed") {
  auto gen = testutil::rng(5);
  const auto t = random_tensor<float>({16, 12, 1}, gen);
  const auto f = random_tensor<float>({16, 12, 1}, gen);
  Network<float> a(small_spec(), 16, 12, 77);
  Network<float> b(small_spec(), 16, 12, 77);
  CHECK(a.flat_weights() == b.flat_weights());
  CHECK(a.forward(t, f) == b.forward(t, f));
}
