// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/kernels.hpp"

#include "kernels_internal.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace uwbhar::kern {

namespace {

template <typename T>
T dot_ref(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
void axpy_ref(T* y, T a, const T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
void scale_ref(T* x, T a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

template <typename T>
T sum_ref(const T* x, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

template <typename T>
void relu_ref(T* y, const T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_grad_ref(T* dx, const T* dy, const T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] > T(0) ? dy[i] : T(0);
}

template <typename T>
void vmadd_ref(T* y, const T* a, const T* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a[i] * b[i];
}

void sgd_momentum_ref(float* w, float* v, const float* g, float lr, float mu, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = mu * v[i] - lr * g[i];
    w[i] += v[i];
  }
}

void cmag_ref(double* dst, const double* iq, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::hypot(iq[2 * i], iq[2 * i + 1]);
}

constexpr Ops kScalarOps = {
    "scalar",        dot_ref<float>,       dot_ref<double>,       axpy_ref<float>,
    axpy_ref<double>, scale_ref<float>,    scale_ref<double>,     sum_ref<float>,
    sum_ref<double>, relu_ref<float>,      relu_ref<double>,      relu_grad_ref<float>,
    relu_grad_ref<double>, vmadd_ref<float>, vmadd_ref<double>, sgd_momentum_ref, cmag_ref,
};

const Ops* select_ops() {
  const char* pin = std::getenv("UWBHAR_KERNELS");
  const bool want_scalar = pin && std::strcmp(pin, "scalar") == 0;
  if (want_scalar) return &kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
  const bool want_avx2 = pin && std::strcmp(pin, "avx2") == 0;
  if (want_avx2 || !pin || std::strcmp(pin, "auto") == 0) {
    if (const Ops* t = avx2_ops_if_supported()) return t;
  }
#elif defined(__aarch64__)
  const bool want_neon = pin && std::strcmp(pin, "neon") == 0;
  if (want_neon || !pin || std::strcmp(pin, "auto") == 0) return &neon_ops();
#endif
  return &kScalarOps;
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& ops() {
  static const Ops* selected = select_ops();
  return *selected;
}

}  // namespace uwbhar::kern
