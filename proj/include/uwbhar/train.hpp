// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "uwbhar/net.hpp"
#include "uwbhar/tensor.hpp"

namespace uwbhar::nn {

// One labeled spectrogram pair, ready for the network ([H, W, 1] tensors).
struct TrainSample {
  Tensor<float> time;
  Tensor<float> freq;
  int label = 0;
  int environment = 0;
};

struct TrainConfig {
  double learning_rate = 3e-4;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 20;
  std::uint64_t shuffle_seed = 1;
  int threads = 0;  // 0 = default_threads()
  bool verbose = false;
};

struct EpochStats {
  double mean_loss = 0.0;
};

// Mini-batch SGD with momentum. Per-batch gradients are accumulated over a
// static partition of the batch and reduced in thread order, so a run is
// reproducible for a fixed thread count. Throws std::runtime_error when the
// loss turns non-finite.
std::vector<EpochStats> train(Network<float>& net, const std::vector<TrainSample>& data,
                              const TrainConfig& cfg);

// Copies weights between structurally identical networks.
template <typename T>
void copy_weights(Network<T>& dst, Network<T>& src);

}  // namespace uwbhar::nn
