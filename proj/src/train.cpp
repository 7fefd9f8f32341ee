// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "uwbhar/kernels.hpp"
#include "uwbhar/parallel.hpp"

namespace uwbhar::nn {

template <typename T>
void copy_weights(Network<T>& dst, Network<T>& src) {
  auto dv = dst.views();
  auto sv = src.views();
  if (dv.size() != sv.size()) throw std::invalid_argument("copy_weights: structure mismatch");
  for (std::size_t i = 0; i < dv.size(); ++i) {
    if (dv[i].n != sv[i].n) throw std::invalid_argument("copy_weights: shape mismatch");
    std::copy(sv[i].w, sv[i].w + sv[i].n, dv[i].w);
  }
}

template void copy_weights<float>(Network<float>&, Network<float>&);
template void copy_weights<double>(Network<double>&, Network<double>&);

std::vector<EpochStats> train(Network<float>& net, const std::vector<TrainSample>& data,
                              const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.batch_size < 1 || cfg.epochs < 1 || cfg.learning_rate <= 0)
    throw std::invalid_argument("train: bad hyperparameters");

  const int threads = std::max(1, cfg.threads == 0 ? default_threads() : cfg.threads);
  const int workers = std::min<int>(threads, cfg.batch_size);

  // Worker replicas: weights are copied in before each batch; gradients are
  // reduced back in worker order.
  std::vector<Network<float>> replicas;
  if (workers > 1) {
    replicas.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
      replicas.emplace_back(net.spec(), net.input_h(), net.input_w(), 0);
  }

  auto views = net.views();
  std::vector<std::vector<float>> velocity;
  velocity.reserve(views.size());
  for (const auto& v : views) velocity.emplace_back(v.n, 0.0f);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochStats> history;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(cfg.shuffle_seed ^ (0x9e3779b97f4a7c15ULL * (epoch + 1)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::size_t count = end - start;

      net.zero_grad();
      std::vector<double> batch_loss(static_cast<std::size_t>(workers), 0.0);

      if (workers == 1 || count == 1) {
        for (std::size_t i = start; i < end; ++i) {
          const TrainSample& s = data[order[i]];
          const float loss = net.loss_and_grad(s.time, s.freq, s.label);
          batch_loss[0] += loss;
        }
      } else {
        for (auto& r : replicas) {
          copy_weights(r, net);
          r.zero_grad();
        }
        const std::size_t chunk = (count + workers - 1) / workers;
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
          const std::size_t b = start + static_cast<std::size_t>(t) * chunk;
          const std::size_t e = std::min(end, b + chunk);
          if (b >= e) break;
          pool.emplace_back([&, t, b, e]() {
            Network<float>& r = replicas[static_cast<std::size_t>(t)];
            for (std::size_t i = b; i < e; ++i) {
              const TrainSample& s = data[order[i]];
              batch_loss[static_cast<std::size_t>(t)] += r.loss_and_grad(s.time, s.freq, s.label);
            }
          });
        }
        for (auto& th : pool) th.join();
        // reduce gradients in worker order
        for (int t = 0; t < workers; ++t) {
          auto rv = replicas[static_cast<std::size_t>(t)].views();
          for (std::size_t vi = 0; vi < views.size(); ++vi)
            kern::axpy(views[vi].g, 1.0f, rv[vi].g, views[vi].n);
        }
      }

      double bl = 0.0;
      for (double v : batch_loss) bl += v;
      if (!std::isfinite(bl))
        throw std::runtime_error("train: loss diverged (non-finite); lower the learning rate");
      loss_sum += bl;

      const float inv = 1.0f / static_cast<float>(count);
      for (std::size_t vi = 0; vi < views.size(); ++vi) {
        kern::scale(views[vi].g, inv, views[vi].n);
        kern::ops().sgd_momentum_f32(views[vi].w, velocity[vi].data(), views[vi].g,
                                     static_cast<float>(cfg.learning_rate),
                                     static_cast<float>(cfg.momentum), views[vi].n);
      }
    }

    EpochStats stats;
    stats.mean_loss = loss_sum / static_cast<double>(data.size());
    history.push_back(stats);
    if (cfg.verbose)
      std::fprintf(stderr, "epoch %d/%d loss=%.4f\n", epoch + 1, cfg.epochs, stats.mean_loss);
  }
  return history;
}

}  // namespace uwbhar::nn
