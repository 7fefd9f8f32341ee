// SPDX-License-Identifier: Apache-2.0
//
// NEON kernel variants. NEON is part of the aarch64 baseline, so no
// runtime probe is needed; the dispatcher selects this table directly.

#include "kernels_internal.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace uwbhar::kern {

namespace {

float dot_f32_neon(const float* a, const float* b, std::size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = vfmaq_f32(acc, vld1q_f32(a + i), vld1q_f32(b + i));
  float out = vaddvq_f32(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

double dot_f64_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy_f32_neon(float* y, float a, const float* x, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_f64_neon(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_f32_neon(float* x, float a, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmulq_f32(va, vld1q_f32(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void scale_f64_neon(double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

float sum_f32_neon(const float* x, std::size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vld1q_f32(x + i));
  float out = vaddvq_f32(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double sum_f64_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

void relu_f32_neon(float* y, const float* x, std::size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(y + i, vmaxq_f32(zero, vld1q_f32(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_f64_neon(double* y, const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmaxq_f64(zero, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad_f32_neon(float* dx, const float* dy, const float* x, std::size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    uint32x4_t mask = vcgtq_f32(vld1q_f32(x + i), zero);
    float32x4_t dyv = vld1q_f32(dy + i);
    vst1q_f32(dx + i, vreinterpretq_f32_u32(vandq_u32(mask, vreinterpretq_u32_f32(dyv))));
  }
  for (; i < n; ++i) dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
}

void relu_grad_f64_neon(double* dx, const double* dy, const double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t mask = vcgtq_f64(vld1q_f64(x + i), zero);
    float64x2_t dyv = vld1q_f64(dy + i);
    vst1q_f64(dx + i, vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(dyv))));
  }
  for (; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void vmadd_f32_neon(float* y, const float* a, const float* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), vld1q_f32(a + i), vld1q_f32(b + i)));
  for (; i < n; ++i) y[i] += a[i] * b[i];
}

void vmadd_f64_neon(double* y, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) y[i] += a[i] * b[i];
}

void sgd_momentum_f32_neon(float* w, float* v, const float* g, float lr, float mu,
                           std::size_t n) {
  const float32x4_t vmu = vdupq_n_f32(mu);
  const float32x4_t vlr = vdupq_n_f32(-lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t vv = vmulq_f32(vmu, vld1q_f32(v + i));
    vv = vfmaq_f32(vv, vlr, vld1q_f32(g + i));
    vst1q_f32(v + i, vv);
    vst1q_f32(w + i, vaddq_f32(vld1q_f32(w + i), vv));
  }
  for (; i < n; ++i) {
    v[i] = mu * v[i] - lr * g[i];
    w[i] += v[i];
  }
}

void cmag_f64_neon(double* dst, const double* iq, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2x2_t z = vld2q_f64(iq + 2 * i);  // deinterleave re/im
    float64x2_t m2 = vfmaq_f64(vmulq_f64(z.val[0], z.val[0]), z.val[1], z.val[1]);
    vst1q_f64(dst + i, vsqrtq_f64(m2));
  }
  for (; i < n; ++i) dst[i] = std::hypot(iq[2 * i], iq[2 * i + 1]);
}

constexpr Ops kNeonOps = {
    "neon",          dot_f32_neon,       dot_f64_neon,       axpy_f32_neon,
    axpy_f64_neon,   scale_f32_neon,     scale_f64_neon,     sum_f32_neon,
    sum_f64_neon,    relu_f32_neon,      relu_f64_neon,      relu_grad_f32_neon,
    relu_grad_f64_neon, vmadd_f32_neon, vmadd_f64_neon, sgd_momentum_f32_neon, cmag_f64_neon,
};

}  // namespace

const Ops& neon_ops() { return kNeonOps; }

}  // namespace uwbhar::kern

#endif  // __aarch64__
