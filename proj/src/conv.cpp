// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/conv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uwbhar/kernels.hpp"

namespace uwbhar::nn {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

ConvGeometry same_geometry(int in_h, int in_w, const ConvSpec& spec) {
  require(spec.kernel >= 1 && spec.dilation >= 1 && spec.stride >= 1 && spec.groups >= 1,
          "conv: invalid spec");
  const int eff = (spec.kernel - 1) * spec.dilation + 1;
  ConvGeometry g;
  g.out_h = (in_h + spec.stride - 1) / spec.stride;
  g.out_w = (in_w + spec.stride - 1) / spec.stride;
  g.pad_h = std::max(0, ((g.out_h - 1) * spec.stride + eff - in_h) / 2);
  g.pad_w = std::max(0, ((g.out_w - 1) * spec.stride + eff - in_w) / 2);
  return g;
}

template <typename T>
Tensor<T> conv_forward(const Tensor<T>& x, const Tensor<T>& w, const ConvSpec& spec) {
  require(x.rank() == 3 && w.rank() == 4, "conv: x must be rank 3, w rank 4");
  const int H = x.dim(0), W = x.dim(1), Cin = x.dim(2);
  const int k = w.dim(0), Cg = w.dim(2), Cout = w.dim(3);
  require(k == spec.kernel && w.dim(1) == k, "conv: kernel size mismatch");
  require(Cin % spec.groups == 0 && Cout % spec.groups == 0,
          "conv: channels not divisible by groups");
  require(Cg == Cin / spec.groups, "conv: weight input-channel slice mismatch");

  const ConvGeometry geo = same_geometry(H, W, spec);
  const int CoutG = Cout / spec.groups;
  Tensor<T> y({geo.out_h, geo.out_w, Cout});

  for (int g = 0; g < spec.groups; ++g) {
    const int cin0 = g * Cg;
    const int cout0 = g * CoutG;
    for (int i = 0; i < geo.out_h; ++i) {
      for (int j = 0; j < geo.out_w; ++j) {
        T* yp = &y(i, j, cout0);
        for (int l = 0; l < k; ++l) {
          const int a = i * spec.stride + l * spec.dilation - geo.pad_h;
          if (a < 0 || a >= H) continue;
          for (int m = 0; m < k; ++m) {
            const int b = j * spec.stride + m * spec.dilation - geo.pad_w;
            if (b < 0 || b >= W) continue;
            const T* xp = &x(a, b, cin0);
            for (int c = 0; c < Cg; ++c)
              kern::axpy(yp, xp[c], &w(l, m, c, cout0), static_cast<std::size_t>(CoutG));
          }
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> conv_backward_input(const Tensor<T>& dy, const Tensor<T>& w, const ConvSpec& spec,
                              int in_h, int in_w) {
  const int k = w.dim(0), Cg = w.dim(2), Cout = w.dim(3);
  const int Cin = Cg * spec.groups;
  const ConvGeometry geo = same_geometry(in_h, in_w, spec);
  require(dy.dim(0) == geo.out_h && dy.dim(1) == geo.out_w && dy.dim(2) == Cout,
          "conv: dy shape mismatch");
  const int CoutG = Cout / spec.groups;

  Tensor<T> dx({in_h, in_w, Cin});
  // Gather form: every dx element is its own reduction, so this is
  // deterministic under any outer parallelization.
  for (int g = 0; g < spec.groups; ++g) {
    const int cin0 = g * Cg;
    const int cout0 = g * CoutG;
    for (int a = 0; a < in_h; ++a) {
      for (int b = 0; b < in_w; ++b) {
        for (int c = 0; c < Cg; ++c) {
          T acc(0);
          for (int l = 0; l < k; ++l) {
            const int num_i = a + geo.pad_h - l * spec.dilation;
            if (num_i < 0 || num_i % spec.stride != 0) continue;
            const int i = num_i / spec.stride;
            if (i >= geo.out_h) continue;
            for (int m = 0; m < k; ++m) {
              const int num_j = b + geo.pad_w - m * spec.dilation;
              if (num_j < 0 || num_j % spec.stride != 0) continue;
              const int j = num_j / spec.stride;
              if (j >= geo.out_w) continue;
              acc += kern::dot(&w(l, m, c, cout0), &dy(i, j, cout0),
                               static_cast<std::size_t>(CoutG));
            }
          }
          dx(a, b, cin0 + c) = acc;
        }
      }
    }
  }
  return dx;
}

template <typename T>
Tensor<T> conv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x, const ConvSpec& spec,
                                int c_out) {
  const int H = x.dim(0), W = x.dim(1), Cin = x.dim(2);
  const int k = spec.kernel;
  const int Cg = Cin / spec.groups;
  const int CoutG = c_out / spec.groups;
  const ConvGeometry geo = same_geometry(H, W, spec);

  Tensor<T> dw({k, k, Cg, c_out});
  for (int g = 0; g < spec.groups; ++g) {
    const int cin0 = g * Cg;
    const int cout0 = g * CoutG;
    for (int l = 0; l < k; ++l) {
      for (int m = 0; m < k; ++m) {
        for (int i = 0; i < geo.out_h; ++i) {
          const int a = i * spec.stride + l * spec.dilation - geo.pad_h;
          if (a < 0 || a >= H) continue;
          for (int j = 0; j < geo.out_w; ++j) {
            const int b = j * spec.stride + m * spec.dilation - geo.pad_w;
            if (b < 0 || b >= W) continue;
            const T* xp = &x(a, b, cin0);
            const T* dyp = &dy(i, j, cout0);
            for (int c = 0; c < Cg; ++c)
              kern::axpy(&dw(l, m, c, cout0), xp[c], dyp, static_cast<std::size_t>(CoutG));
          }
        }
      }
    }
  }
  return dw;
}

template <typename T>
Tensor<T> pconv_forward(const Tensor<T>& x, const Tensor<T>& w) {
  require(x.rank() == 3 && w.rank() == 2, "pconv: x rank 3, w rank 2");
  const int Cin = x.dim(2), Cout = w.dim(1);
  require(w.dim(0) == Cin, "pconv: channel mismatch");
  const std::size_t pixels = static_cast<std::size_t>(x.dim(0)) * x.dim(1);

  Tensor<T> y({x.dim(0), x.dim(1), Cout});
  const T* xp = x.data.data();
  T* yp = y.data.data();
  for (std::size_t p = 0; p < pixels; ++p, xp += Cin, yp += Cout)
    for (int c = 0; c < Cin; ++c)
      kern::axpy(yp, xp[c], &w(c, 0), static_cast<std::size_t>(Cout));
  return y;
}

template <typename T>
Tensor<T> pconv_backward_input(const Tensor<T>& dy, const Tensor<T>& w) {
  const int Cin = w.dim(0), Cout = w.dim(1);
  require(dy.dim(2) == Cout, "pconv: dy channel mismatch");
  const std::size_t pixels = static_cast<std::size_t>(dy.dim(0)) * dy.dim(1);

  Tensor<T> dx({dy.dim(0), dy.dim(1), Cin});
  const T* dyp = dy.data.data();
  T* dxp = dx.data.data();
  for (std::size_t p = 0; p < pixels; ++p, dyp += Cout, dxp += Cin)
    for (int c = 0; c < Cin; ++c)
      dxp[c] = kern::dot(&w(c, 0), dyp, static_cast<std::size_t>(Cout));
  return dx;
}

template <typename T>
Tensor<T> pconv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x) {
  const int Cin = x.dim(2), Cout = dy.dim(2);
  const std::size_t pixels = static_cast<std::size_t>(x.dim(0)) * x.dim(1);

  Tensor<T> dw({Cin, Cout});
  const T* xp = x.data.data();
  const T* dyp = dy.data.data();
  for (std::size_t p = 0; p < pixels; ++p, xp += Cin, dyp += Cout)
    for (int c = 0; c < Cin; ++c)
      kern::axpy(&dw(c, 0), xp[c], dyp, static_cast<std::size_t>(Cout));
  return dw;
}

template <typename T>
Tensor<T> dconv_forward(const Tensor<T>& x, const Tensor<T>& w, int dilation, int stride) {
  require(x.rank() == 3 && w.rank() == 3, "dconv: x rank 3, w rank 3");
  const int H = x.dim(0), W = x.dim(1), C = x.dim(2);
  const int k = w.dim(0);
  require(w.dim(1) == k && w.dim(2) == C, "dconv: channel mismatch");
  const ConvSpec spec{k, C, dilation, stride};
  const ConvGeometry geo = same_geometry(H, W, spec);

  Tensor<T> y({geo.out_h, geo.out_w, C});
  for (int i = 0; i < geo.out_h; ++i) {
    for (int j = 0; j < geo.out_w; ++j) {
      T* yp = &y(i, j, 0);
      for (int l = 0; l < k; ++l) {
        const int a = i * stride + l * dilation - geo.pad_h;
        if (a < 0 || a >= H) continue;
        for (int m = 0; m < k; ++m) {
          const int b = j * stride + m * dilation - geo.pad_w;
          if (b < 0 || b >= W) continue;
          kern::vmadd(yp, &x(a, b, 0), &w(l, m, 0), static_cast<std::size_t>(C));
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> dconv_backward_input(const Tensor<T>& dy, const Tensor<T>& w, int dilation, int stride,
                               int in_h, int in_w) {
  const int k = w.dim(0), C = w.dim(2);
  const ConvSpec spec{k, C, dilation, stride};
  const ConvGeometry geo = same_geometry(in_h, in_w, spec);

  Tensor<T> dx({in_h, in_w, C});
  for (int a = 0; a < in_h; ++a) {
    for (int b = 0; b < in_w; ++b) {
      T* dxp = &dx(a, b, 0);
      for (int l = 0; l < k; ++l) {
        const int num_i = a + geo.pad_h - l * dilation;
        if (num_i < 0 || num_i % stride != 0) continue;
        const int i = num_i / stride;
        if (i >= geo.out_h) continue;
        for (int m = 0; m < k; ++m) {
          const int num_j = b + geo.pad_w - m * dilation;
          if (num_j < 0 || num_j % stride != 0) continue;
          const int j = num_j / stride;
          if (j >= geo.out_w) continue;
          kern::vmadd(dxp, &w(l, m, 0), &dy(i, j, 0), static_cast<std::size_t>(C));
        }
      }
    }
  }
  return dx;
}

template <typename T>
Tensor<T> dconv_backward_weights(const Tensor<T>& dy, const Tensor<T>& x, int k, int dilation,
                                 int stride) {
  const int H = x.dim(0), W = x.dim(1), C = x.dim(2);
  const ConvSpec spec{k, C, dilation, stride};
  const ConvGeometry geo = same_geometry(H, W, spec);

  Tensor<T> dw({k, k, C});
  for (int l = 0; l < k; ++l) {
    for (int m = 0; m < k; ++m) {
      T* dwp = &dw(l, m, 0);
      for (int i = 0; i < geo.out_h; ++i) {
        const int a = i * spec.stride + l * dilation - geo.pad_h;
        if (a < 0 || a >= H) continue;
        for (int j = 0; j < geo.out_w; ++j) {
          const int b = j * spec.stride + m * dilation - geo.pad_w;
          if (b < 0 || b >= W) continue;
          kern::vmadd(dwp, &x(a, b, 0), &dy(i, j, 0), static_cast<std::size_t>(C));
        }
      }
    }
  }
  return dw;
}

template <typename T>
Tensor<T> sconv_forward(const Tensor<T>& x, const Tensor<T>& w_d, const Tensor<T>& w_p,
                        int dilation, int stride) {
  return pconv_forward(dconv_forward(x, w_d, dilation, stride), w_p);
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  Tensor<T> y = x;
  kern::relu(y.data.data(), x.data.data(), x.size());
  return y;
}

template <typename T>
std::vector<T> softmax(const std::vector<T>& logits) {
  require(!logits.empty(), "softmax: empty input");
  const T max = *std::max_element(logits.begin(), logits.end());
  std::vector<T> out(logits.size());
  T denom(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max);
    denom += out[i];
  }
  for (T& v : out) v /= denom;
  return out;
}

template <typename T>
T cross_entropy(const std::vector<T>& probs, int label) {
  require(label >= 0 && static_cast<std::size_t>(label) < probs.size(),
          "cross_entropy: label out of range");
  const T p = std::max(probs[static_cast<std::size_t>(label)], static_cast<T>(1e-12));
  return -std::log(p);
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> channel_split(const Tensor<T>& x) {
  require(x.rank() == 3, "channel_split: rank-3 input required");
  const int C = x.dim(2);
  require(C % 2 == 0, "channel_split: odd channel count");
  const int half = C / 2;
  Tensor<T> a({x.dim(0), x.dim(1), half});
  Tensor<T> b({x.dim(0), x.dim(1), half});
  const std::size_t pixels = static_cast<std::size_t>(x.dim(0)) * x.dim(1);
  for (std::size_t p = 0; p < pixels; ++p) {
    const T* src = x.data.data() + p * C;
    std::copy(src, src + half, a.data.data() + p * half);
    std::copy(src + half, src + C, b.data.data() + p * half);
  }
  return {std::move(a), std::move(b)};
}

template <typename T>
Tensor<T> concat(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.rank() == 3 && b.rank() == 3, "concat: rank-3 inputs required");
  require(a.dim(0) == b.dim(0) && a.dim(1) == b.dim(1), "concat: spatial shape mismatch");
  const int Ca = a.dim(2), Cb = b.dim(2);
  Tensor<T> y({a.dim(0), a.dim(1), Ca + Cb});
  const std::size_t pixels = static_cast<std::size_t>(a.dim(0)) * a.dim(1);
  for (std::size_t p = 0; p < pixels; ++p) {
    std::copy(a.data.data() + p * Ca, a.data.data() + (p + 1) * Ca,
              y.data.data() + p * (Ca + Cb));
    std::copy(b.data.data() + p * Cb, b.data.data() + (p + 1) * Cb,
              y.data.data() + p * (Ca + Cb) + Ca);
  }
  return y;
}

// ----------------------------------------------------------- instantiations
#define UWBHAR_INSTANTIATE(T)                                                                  \
  template Tensor<T> conv_forward<T>(const Tensor<T>&, const Tensor<T>&, const ConvSpec&);    \
  template Tensor<T> conv_backward_input<T>(const Tensor<T>&, const Tensor<T>&,               \
                                            const ConvSpec&, int, int);                       \
  template Tensor<T> conv_backward_weights<T>(const Tensor<T>&, const Tensor<T>&,             \
                                              const ConvSpec&, int);                          \
  template Tensor<T> pconv_forward<T>(const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> pconv_backward_input<T>(const Tensor<T>&, const Tensor<T>&);             \
  template Tensor<T> pconv_backward_weights<T>(const Tensor<T>&, const Tensor<T>&);           \
  template Tensor<T> dconv_forward<T>(const Tensor<T>&, const Tensor<T>&, int, int);          \
  template Tensor<T> dconv_backward_input<T>(const Tensor<T>&, const Tensor<T>&, int, int,    \
                                             int, int);                                       \
  template Tensor<T> dconv_backward_weights<T>(const Tensor<T>&, const Tensor<T>&, int, int,  \
                                               int);                                           \
  template Tensor<T> sconv_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,   \
                                      int, int);                                              \
  template Tensor<T> relu<T>(const Tensor<T>&);                                               \
  template std::vector<T> softmax<T>(const std::vector<T>&);                                  \
  template T cross_entropy<T>(const std::vector<T>&, int);                                    \
  template std::pair<Tensor<T>, Tensor<T>> channel_split<T>(const Tensor<T>&);                \
  template Tensor<T> concat<T>(const Tensor<T>&, const Tensor<T>&);

UWBHAR_INSTANTIATE(float)
UWBHAR_INSTANTIATE(double)

#undef UWBHAR_INSTANTIATE

}  // namespace uwbhar::nn
