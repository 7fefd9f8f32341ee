// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace uwbhar::nn {

// Dense row-major real array of rank 1..4. Feature maps are [H, W, C],
// kernels [k, k, c_in_per_group, c_out].
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(static_cast<std::size_t>(count(shape)), T(0));
  }

  static long long count(const std::vector<int>& s) {
    long long n = 1;
    for (int d : s) {
      if (d <= 0) throw std::invalid_argument("tensor: non-positive dimension");
      n *= d;
    }
    return n;
  }

  std::size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }

  T& operator()(int i) { return data[static_cast<std::size_t>(i)]; }
  const T& operator()(int i) const { return data[static_cast<std::size_t>(i)]; }
  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * dim(1) + j]; }
  const T& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * dim(1) + j];
  }
  T& operator()(int i, int j, int k) {
    return data[(static_cast<std::size_t>(i) * dim(1) + j) * dim(2) + k];
  }
  const T& operator()(int i, int j, int k) const {
    return data[(static_cast<std::size_t>(i) * dim(1) + j) * dim(2) + k];
  }
  T& operator()(int i, int j, int k, int l) {
    return data[((static_cast<std::size_t>(i) * dim(1) + j) * dim(2) + k) * dim(3) + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return data[((static_cast<std::size_t>(i) * dim(1) + j) * dim(2) + k) * dim(3) + l];
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

}  // namespace uwbhar::nn
