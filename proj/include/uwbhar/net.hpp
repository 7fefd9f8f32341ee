// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uwbhar/conv.hpp"
#include "uwbhar/tensor.hpp"

namespace uwbhar::nn {

enum class OpKind : std::uint8_t {
  Conv = 0,
  PConv = 1,
  DConv = 2,
  GConv = 3,
  SConv = 4,
  FC = 5,
  ReLU = 6,
  Softmax = 7,
  ChannelSplit = 8,
  Concat = 9,
};

const char* op_kind_name(OpKind kind);

// One reduce-split-transform-merge block: 1x1 grouped reduce, channel split,
// dilated depth-wise separable conv on the first half, concat with the
// (decimated) second half, 1x1 point-wise merge, ReLU. Spatial downsampling
// happens on the depth-wise conv via stride.
struct BlockSpec {
  int reduce_groups = 1;
  int kernel = 3;
  int dilation = 2;
  int stride = 2;
  int channels_in = 1;
  int channels_mid = 16;
  int channels_out = 16;

  void validate() const;
};

enum class BranchMode { Fused, TimeOnly, FreqOnly };

struct NetworkSpec {
  std::vector<BlockSpec> time_branch;
  std::vector<BlockSpec> freq_branch;
  int head_hidden = 128;
  int num_classes = 7;
  BranchMode mode = BranchMode::Fused;

  static NetworkSpec defaults();
  void validate() const;
};

struct LayerInfo {
  std::string name;
  OpKind kind = OpKind::Conv;
  int kernel = 0;
  int groups = 1;
  int dilation = 1;
  std::size_t params = 0;
  long long macs = 0;               // multiply-accumulates per inference
  std::vector<int> weight_shape;    // empty for structural layers
};

// The two-branch classifier. Weights live in per-layer tensors; views()
// exposes them in declaration order for the optimizer, gradient checks and
// the weights file.
template <typename T>
class Network {
 public:
  Network(const NetworkSpec& spec, int input_h, int input_w, std::uint64_t init_seed);

  // Class probabilities for one normalized spectrogram pair. Single-branch
  // modes ignore the unused input.
  std::vector<T> forward(const Tensor<T>& time_in, const Tensor<T>& freq_in);

  // Softmax cross-entropy on one labeled sample; accumulates weight
  // gradients and returns the loss.
  T loss_and_grad(const Tensor<T>& time_in, const Tensor<T>& freq_in, int label);

  void zero_grad();

  struct View {
    T* w;
    T* g;
    std::size_t n;
  };
  std::vector<View> views();

  std::size_t param_count() const;
  long long flop_count() const;  // 2 FLOPs per MAC
  const std::vector<LayerInfo>& layer_table() const { return table_; }
  const NetworkSpec& spec() const { return spec_; }
  int input_h() const { return in_h_; }
  int input_w() const { return in_w_; }

  // Flattened branch outputs of the last forward() (pre-fusion features).
  const std::vector<T>& time_features() const;
  const std::vector<T>& freq_features() const;

  std::vector<T> flat_weights() const;
  void set_flat_weights(const std::vector<T>& w);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  NetworkSpec spec_;
  std::vector<LayerInfo> table_;
  int in_h_, in_w_;
};

extern template class Network<float>;
extern template class Network<double>;

}  // namespace uwbhar::nn
