// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace uwbhar::kern {

// Flat-array kernels behind the convolution, filtering and feature inner
// loops. Every entry exists as a portable scalar reference plus SIMD
// variants (AVX2+FMA on x86-64, NEON on aarch64) chosen once at startup.
// The environment variable UWBHAR_KERNELS=scalar|avx2|neon|auto pins the
// choice; "auto" probes the CPU.
struct Ops {
  const char* name;

  float (*dot_f32)(const float* a, const float* b, std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);

  // y[i] += a * x[i]
  void (*axpy_f32)(float* y, float a, const float* x, std::size_t n);
  void (*axpy_f64)(double* y, double a, const double* x, std::size_t n);

  void (*scale_f32)(float* x, float a, std::size_t n);
  void (*scale_f64)(double* x, double a, std::size_t n);

  float (*sum_f32)(const float* x, std::size_t n);
  double (*sum_f64)(const double* x, std::size_t n);

  // y[i] = max(x[i], 0)
  void (*relu_f32)(float* y, const float* x, std::size_t n);
  void (*relu_f64)(double* y, const double* x, std::size_t n);

  // dx[i] = x[i] > 0 ? dy[i] : 0
  void (*relu_grad_f32)(float* dx, const float* dy, const float* x, std::size_t n);
  void (*relu_grad_f64)(double* dx, const double* dy, const double* x, std::size_t n);

  // y[i] += a[i] * b[i]
  void (*vmadd_f32)(float* y, const float* a, const float* b, std::size_t n);
  void (*vmadd_f64)(double* y, const double* a, const double* b, std::size_t n);

  // v[i] = mu*v[i] - lr*g[i]; w[i] += v[i]
  void (*sgd_momentum_f32)(float* w, float* v, const float* g, float lr, float mu,
                           std::size_t n);

  // dst[i] = |iq[2i] + j*iq[2i+1]| over interleaved complex data
  void (*cmag_f64)(double* dst, const double* iq, std::size_t n);
};

const Ops& scalar_ops();  // reference table, always available
const Ops& ops();         // runtime-selected table

// Typed forwarders so templated numeric code does not switch on scalar type.
inline float dot(const float* a, const float* b, std::size_t n) { return ops().dot_f32(a, b, n); }
inline double dot(const double* a, const double* b, std::size_t n) { return ops().dot_f64(a, b, n); }
inline void axpy(float* y, float a, const float* x, std::size_t n) { ops().axpy_f32(y, a, x, n); }
inline void axpy(double* y, double a, const double* x, std::size_t n) { ops().axpy_f64(y, a, x, n); }
inline void scale(float* x, float a, std::size_t n) { ops().scale_f32(x, a, n); }
inline void scale(double* x, double a, std::size_t n) { ops().scale_f64(x, a, n); }
inline float sum(const float* x, std::size_t n) { return ops().sum_f32(x, n); }
inline double sum(const double* x, std::size_t n) { return ops().sum_f64(x, n); }
inline void relu(float* y, const float* x, std::size_t n) { ops().relu_f32(y, x, n); }
inline void relu(double* y, const double* x, std::size_t n) { ops().relu_f64(y, x, n); }
inline void relu_grad(float* dx, const float* dy, const float* x, std::size_t n) {
  ops().relu_grad_f32(dx, dy, x, n);
}
inline void relu_grad(double* dx, const double* dy, const double* x, std::size_t n) {
  ops().relu_grad_f64(dx, dy, x, n);
}
inline void vmadd(float* y, const float* a, const float* b, std::size_t n) {
  ops().vmadd_f32(y, a, b, n);
}
inline void vmadd(double* y, const double* a, const double* b, std::size_t n) {
  ops().vmadd_f64(y, a, b, n);
}

}  // namespace uwbhar::kern
