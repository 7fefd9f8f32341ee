// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uwbhar/net.hpp"

namespace uwbhar::nn {

// Closed-form parameter counts per convolution kind.
inline std::size_t conv_params(int k, int c_in, int c_out) {
  return static_cast<std::size_t>(k) * k * c_in * c_out;
}
inline std::size_t pconv_params(int c_in, int c_out) {
  return static_cast<std::size_t>(c_in) * c_out;
}
inline std::size_t dconv_params(int k, int c_in) {
  return static_cast<std::size_t>(k) * k * c_in;
}
inline std::size_t gconv_params(int k, int c_in, int c_out, int groups) {
  return static_cast<std::size_t>(k) * k * c_in * c_out / static_cast<std::size_t>(groups);
}
inline std::size_t sconv_params(int k, int c_in, int c_out) {
  return dconv_params(k, c_in) + pconv_params(c_in, c_out);
}

// Multiply-accumulate counts at a given output size (2 FLOPs per MAC).
inline long long conv_macs(int out_h, int out_w, int k, int c_in, int c_out, int groups = 1) {
  return static_cast<long long>(out_h) * out_w * k * k * (c_in / groups) * c_out;
}
inline long long dconv_macs(int out_h, int out_w, int k, int c) {
  return static_cast<long long>(out_h) * out_w * k * k * c;
}
inline long long pconv_macs(int out_h, int out_w, int c_in, int c_out) {
  return static_cast<long long>(out_h) * out_w * c_in * c_out;
}
inline long long sconv_macs(int out_h, int out_w, int k, int c_in, int c_out) {
  return dconv_macs(out_h, out_w, k, c_in) + pconv_macs(out_h, out_w, c_in, c_out);
}

// Per-layer table with params, FLOPs and cumulative totals.
std::string format_layer_table(const std::vector<LayerInfo>& table);

}  // namespace uwbhar::nn
