// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "uwbhar/tensor.hpp"

namespace uwbhar::nn {

// Grouped / dilated / strided 2-D convolution with "same" padding. All five
// variants reduce to this geometry:
//   conv  -> groups = 1
//   pconv -> kernel = 1 (dedicated fast path below)
//   dconv -> groups = channels, one filter per group (dedicated fast path)
//   gconv -> groups = G
//   sconv -> dconv followed by pconv
struct ConvSpec {
  int kernel = 3;
  int groups = 1;
  int dilation = 1;
  int stride = 1;
};

// Output spatial size and begin-padding for "same" semantics.
struct ConvGeometry {
  int out_h, out_w;
  int pad_h, pad_w;  // begin padding
};
ConvGeometry same_geometry(int in_h, int in_w, const ConvSpec& spec);

// x: [H, W, c_in], w: [k, k, c_in/G, c_out] -> [out_h, out_w, c_out].
// Weight column o uses the input-channel slice of o's group, so the stored
// parameter count is k^2 * c_in * c_out / G.
template <typename T>
Tensor<T> conv_forward(const Tensor<T>& x, const Tensor<T>& w, const ConvSpec& spec);
template <typename T>
Tensor<T> conv_backward_input(const Tensor<T>& dy, const Tensor<T>& w, const ConvSpec& spec,
                              int in_h, int in_w);
template <typename T>
Tensor<T> conv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x, const ConvSpec& spec,
                                int c_out);

// Point-wise (1x1) channel mixing; w: [c_in, c_out].
template <typename T>
Tensor<T> pconv_forward(const Tensor<T>& x, const Tensor<T>& w);
template <typename T>
Tensor<T> pconv_backward_input(const Tensor<T>& dy, const Tensor<T>& w);
template <typename T>
Tensor<T> pconv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x);

// Depth-wise: w: [k, k, c], channel c convolved only with slice c.
template <typename T>
Tensor<T> dconv_forward(const Tensor<T>& x, const Tensor<T>& w, int dilation = 1, int stride = 1);
template <typename T>
Tensor<T> dconv_backward_input(const Tensor<T>& dy, const Tensor<T>& w, int dilation, int stride,
                               int in_h, int in_w);
template <typename T>
Tensor<T> dconv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x, int kernel,
                                 int dilation, int stride);

// Depth-wise separable: pconv(w_p, dconv(w_d, x)).
template <typename T>
Tensor<T> sconv_forward(const Tensor<T>& x, const Tensor<T>& w_d, const Tensor<T>& w_p,
                        int dilation = 1, int stride = 1);

template <typename T>
Tensor<T> relu(const Tensor<T>& x);

template <typename T>
std::vector<T> softmax(const std::vector<T>& logits);

// L = -sum_c y_c log p_c with p clamped at 1e-12 before the log.
template <typename T>
T cross_entropy(const std::vector<T>& probs, int label);

// Halves along the channel axis: [0, c/2) and [c/2, c).
template <typename T>
std::pair<Tensor<T>, Tensor<T>> channel_split(const Tensor<T>& x);
template <typename T>
Tensor<T> concat(const Tensor<T>& a, const Tensor<T>& b);

// Explicit instantiations live in conv.cpp.

}  // namespace uwbhar::nn
