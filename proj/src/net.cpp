// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/net.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "uwbhar/kernels.hpp"

namespace uwbhar::nn {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

template <typename T>
void accumulate(Tensor<T>& dst, const Tensor<T>& src) {
  kern::axpy(dst.data.data(), T(1), src.data.data(), src.size());
}

// He-uniform initialization, drawn in declaration order.
template <typename T>
void init_uniform(Tensor<T>& w, double fan_in, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / fan_in);
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (T& v : w.data) v = static_cast<T>(dist(rng));
}

}  // namespace

const char* op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::Conv: return "conv";
    case OpKind::PConv: return "pconv";
    case OpKind::DConv: return "dconv";
    case OpKind::GConv: return "gconv";
    case OpKind::SConv: return "sconv";
    case OpKind::FC: return "fc";
    case OpKind::ReLU: return "relu";
    case OpKind::Softmax: return "softmax";
    case OpKind::ChannelSplit: return "split";
    case OpKind::Concat: return "concat";
  }
  return "?";
}

void BlockSpec::validate() const {
  require(kernel >= 1 && kernel % 2 == 1, "block: kernel must be odd and >= 1");
  require(dilation >= 1, "block: dilation must be >= 1");
  require(stride >= 1, "block: stride must be >= 1");
  require(reduce_groups >= 1, "block: groups must be >= 1");
  require(channels_in % reduce_groups == 0 && channels_mid % reduce_groups == 0,
          "block: channels not divisible by reduce groups");
  require(channels_mid % 2 == 0, "block: mid channels must be even for the split");
  require(channels_in >= 1 && channels_mid >= 2 && channels_out >= 1, "block: bad channels");
}

NetworkSpec NetworkSpec::defaults() {
  NetworkSpec spec;
  spec.time_branch = {
      {1, 3, 2, 2, 1, 16, 16},
      {4, 3, 2, 2, 16, 32, 32},
      {4, 3, 2, 2, 32, 64, 64},
  };
  spec.freq_branch = spec.time_branch;
  return spec;
}

void NetworkSpec::validate() const {
  const bool use_time = mode != BranchMode::FreqOnly;
  const bool use_freq = mode != BranchMode::TimeOnly;
  require(!use_time || time_branch.size() == 3, "network: time branch must have 3 blocks");
  require(!use_freq || freq_branch.size() == 3, "network: freq branch must have 3 blocks");
  require(num_classes == 7, "network: class count must be 7");
  require(head_hidden >= 1, "network: head width must be >= 1");
  for (const auto& b : time_branch) b.validate();
  for (const auto& b : freq_branch) b.validate();
  auto chained = [](const std::vector<BlockSpec>& blocks) {
    for (std::size_t i = 1; i < blocks.size(); ++i)
      if (blocks[i].channels_in != blocks[i - 1].channels_out) return false;
    return true;
  };
  require(chained(time_branch) && chained(freq_branch), "network: block channels do not chain");
}

// ------------------------------------------------------------------- layers

namespace {

template <typename T>
struct GConvLayer {  // 1x1 grouped reduce
  ConvSpec spec;
  Tensor<T> w, g;
  Tensor<T> x_cache;

  Tensor<T> forward(const Tensor<T>& x) {
    x_cache = x;
    return conv_forward(x, w, spec);
  }
  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dw = conv_backward_weights(dy, x_cache, spec, w.dim(3));
    accumulate(g, dw);
    return conv_backward_input(dy, w, spec, x_cache.dim(0), x_cache.dim(1));
  }
};

template <typename T>
struct DConvLayer {
  int kernel, dilation, stride;
  Tensor<T> w, g;
  Tensor<T> x_cache;

  Tensor<T> forward(const Tensor<T>& x) {
    x_cache = x;
    return dconv_forward(x, w, dilation, stride);
  }
  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dw = dconv_backward_weights(dy, x_cache, kernel, dilation, stride);
    accumulate(g, dw);
    return dconv_backward_input(dy, w, dilation, stride, x_cache.dim(0), x_cache.dim(1));
  }
};

template <typename T>
struct PConvLayer {
  Tensor<T> w, g;
  Tensor<T> x_cache;

  Tensor<T> forward(const Tensor<T>& x) {
    x_cache = x;
    return pconv_forward(x, w);
  }
  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dw = pconv_backward_weights(dy, x_cache);
    accumulate(g, dw);
    return pconv_backward_input(dy, w);
  }
};

template <typename T>
struct FCLayer {
  Tensor<T> w, g;   // [in, out]
  Tensor<T> b, gb;  // [out]
  std::vector<T> x_cache;

  std::vector<T> forward(const std::vector<T>& x) {
    x_cache = x;
    const int in = w.dim(0), out = w.dim(1);
    std::vector<T> y(b.data.begin(), b.data.end());
    for (int i = 0; i < in; ++i)
      kern::axpy(y.data(), x[static_cast<std::size_t>(i)], &w(i, 0),
                 static_cast<std::size_t>(out));
    return y;
  }
  std::vector<T> backward(const std::vector<T>& dy) {
    const int in = w.dim(0), out = w.dim(1);
    kern::axpy(gb.data.data(), T(1), dy.data(), static_cast<std::size_t>(out));
    std::vector<T> dx(static_cast<std::size_t>(in));
    for (int i = 0; i < in; ++i) {
      kern::axpy(&g(i, 0), x_cache[static_cast<std::size_t>(i)], dy.data(),
                 static_cast<std::size_t>(out));
      dx[static_cast<std::size_t>(i)] = kern::dot(&w(i, 0), dy.data(),
                                                  static_cast<std::size_t>(out));
    }
    return dx;
  }
};

// Strided subsampling of the passthrough half so it matches the depth-wise
// conv's output grid.
template <typename T>
Tensor<T> decimate(const Tensor<T>& x, int stride, int out_h, int out_w) {
  if (stride == 1) return x;
  Tensor<T> y({out_h, out_w, x.dim(2)});
  for (int i = 0; i < out_h; ++i)
    for (int j = 0; j < out_w; ++j)
      for (int c = 0; c < x.dim(2); ++c) y(i, j, c) = x(i * stride, j * stride, c);
  return y;
}

template <typename T>
Tensor<T> scatter_decimated(const Tensor<T>& dy, int stride, int in_h, int in_w) {
  if (stride == 1) return dy;
  Tensor<T> dx({in_h, in_w, dy.dim(2)});
  for (int i = 0; i < dy.dim(0); ++i)
    for (int j = 0; j < dy.dim(1); ++j)
      for (int c = 0; c < dy.dim(2); ++c) dx(i * stride, j * stride, c) = dy(i, j, c);
  return dx;
}

template <typename T>
struct Block {
  BlockSpec spec;
  GConvLayer<T> reduce;
  DConvLayer<T> dw;
  PConvLayer<T> pw;
  PConvLayer<T> merge;
  int in_h = 0, in_w = 0, out_h = 0, out_w = 0;
  Tensor<T> prerelu_cache;

  void build(int h, int w_, std::mt19937_64& rng) {
    in_h = h;
    in_w = w_;
    const int half = spec.channels_mid / 2;

    reduce.spec = ConvSpec{1, spec.reduce_groups, 1, 1};
    reduce.w = Tensor<T>({1, 1, spec.channels_in / spec.reduce_groups, spec.channels_mid});
    init_uniform(reduce.w, spec.channels_in / spec.reduce_groups, rng);

    dw.kernel = spec.kernel;
    dw.dilation = spec.dilation;
    dw.stride = spec.stride;
    dw.w = Tensor<T>({spec.kernel, spec.kernel, half});
    init_uniform(dw.w, spec.kernel * spec.kernel, rng);

    pw.w = Tensor<T>({half, half});
    init_uniform(pw.w, half, rng);

    merge.w = Tensor<T>({spec.channels_mid, spec.channels_out});
    init_uniform(merge.w, spec.channels_mid, rng);

    const ConvGeometry geo = same_geometry(h, w_, ConvSpec{spec.kernel, 1, spec.dilation,
                                                           spec.stride});
    out_h = geo.out_h;
    out_w = geo.out_w;
    zero_grad();
  }

  void zero_grad() {
    // fill, never reallocate: views() hands out stable pointers
    if (reduce.g.data.empty()) {
      reduce.g = Tensor<T>(reduce.w.shape);
      dw.g = Tensor<T>(dw.w.shape);
      pw.g = Tensor<T>(pw.w.shape);
      merge.g = Tensor<T>(merge.w.shape);
      return;
    }
    reduce.g.fill(T(0));
    dw.g.fill(T(0));
    pw.g.fill(T(0));
    merge.g.fill(T(0));
  }

  Tensor<T> forward(const Tensor<T>& x) {
    Tensor<T> t = reduce.forward(x);
    auto [h1, h2] = channel_split(t);
    Tensor<T> v = pw.forward(dw.forward(h1));
    Tensor<T> cat = concat(v, decimate(h2, spec.stride, out_h, out_w));
    Tensor<T> z = merge.forward(cat);
    prerelu_cache = z;
    return relu(z);
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> dz = dy;
    kern::relu_grad(dz.data.data(), dy.data.data(), prerelu_cache.data.data(), dz.size());
    Tensor<T> dcat = merge.backward(dz);
    auto [dv, dh2d] = channel_split(dcat);
    Tensor<T> dh1 = dw.backward(pw.backward(dv));
    Tensor<T> dh2 = scatter_decimated(dh2d, spec.stride, in_h, in_w);
    Tensor<T> dt = concat(dh1, dh2);
    return reduce.backward(dt);
  }
};

template <typename T>
struct Branch {
  std::vector<Block<T>> blocks;
  int out_h = 0, out_w = 0, out_c = 0;

  void build(const std::vector<BlockSpec>& specs, int h, int w, std::mt19937_64& rng) {
    blocks.clear();
    blocks.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
      blocks[i].spec = specs[i];
      blocks[i].build(h, w, rng);
      h = blocks[i].out_h;
      w = blocks[i].out_w;
    }
    out_h = h;
    out_w = w;
    out_c = specs.empty() ? 0 : specs.back().channels_out;
  }

  Tensor<T> forward(const Tensor<T>& x) {
    Tensor<T> y = x;
    for (auto& b : blocks) y = b.forward(y);
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> d = dy;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) d = it->backward(d);
    return d;
  }

  std::size_t flat_size() const {
    return static_cast<std::size_t>(out_h) * out_w * out_c;
  }
};

}  // namespace

// ------------------------------------------------------------------ network

template <typename T>
struct Network<T>::Impl {
  Branch<T> time_branch, freq_branch;
  FCLayer<T> fc1, fc2;
  BranchMode mode = BranchMode::Fused;
  std::vector<T> time_feat, freq_feat;
  std::vector<T> hidden_pre, hidden_post;  // caches for the head backward
  std::vector<T> probs;
};

template <typename T>
Network<T>::Network(const NetworkSpec& spec, int input_h, int input_w, std::uint64_t init_seed)
    : impl_(std::make_shared<Impl>()), spec_(spec), in_h_(input_h), in_w_(input_w) {
  spec.validate();
  require(input_h >= 1 && input_w >= 1, "network: bad input shape");
  std::mt19937_64 rng(init_seed);
  impl_->mode = spec.mode;

  const bool use_time = spec.mode != BranchMode::FreqOnly;
  const bool use_freq = spec.mode != BranchMode::TimeOnly;

  std::size_t fused = 0;
  if (use_time) {
    impl_->time_branch.build(spec.time_branch, input_h, input_w, rng);
    fused += impl_->time_branch.flat_size();
  }
  if (use_freq) {
    impl_->freq_branch.build(spec.freq_branch, input_h, input_w, rng);
    fused += impl_->freq_branch.flat_size();
  }

  impl_->fc1.w = Tensor<T>({static_cast<int>(fused), spec.head_hidden});
  impl_->fc1.b = Tensor<T>({spec.head_hidden});
  init_uniform(impl_->fc1.w, static_cast<double>(fused), rng);
  impl_->fc2.w = Tensor<T>({spec.head_hidden, spec.num_classes});
  impl_->fc2.b = Tensor<T>({spec.num_classes});
  init_uniform(impl_->fc2.w, spec.head_hidden, rng);
  zero_grad();

  // Accounting table, in declaration order.
  auto add_branch = [&](const char* prefix, const Branch<T>& br) {
    int h = input_h, w = input_w;
    for (std::size_t i = 0; i < br.blocks.size(); ++i) {
      const Block<T>& b = br.blocks[i];
      const BlockSpec& bs = b.spec;
      const std::string base = std::string(prefix) + ".b" + std::to_string(i);
      const long long in_px = static_cast<long long>(h) * w;
      const long long out_px = static_cast<long long>(b.out_h) * b.out_w;
      const int half = bs.channels_mid / 2;
      table_.push_back({base + ".reduce", OpKind::GConv, 1, bs.reduce_groups, 1,
                        b.reduce.w.size(),
                        in_px * bs.channels_in * bs.channels_mid / bs.reduce_groups,
                        b.reduce.w.shape});
      table_.push_back({base + ".split", OpKind::ChannelSplit, 0, 1, 1, 0, 0, {}});
      table_.push_back({base + ".dwconv", OpKind::DConv, bs.kernel, half, bs.dilation,
                        b.dw.w.size(),
                        out_px * bs.kernel * bs.kernel * half, b.dw.w.shape});
      table_.push_back({base + ".pwconv", OpKind::PConv, 1, 1, 1, b.pw.w.size(),
                        out_px * half * half, b.pw.w.shape});
      table_.push_back({base + ".concat", OpKind::Concat, 0, 1, 1, 0, 0, {}});
      table_.push_back({base + ".merge", OpKind::PConv, 1, 1, 1, b.merge.w.size(),
                        out_px * bs.channels_mid * bs.channels_out, b.merge.w.shape});
      table_.push_back({base + ".relu", OpKind::ReLU, 0, 1, 1, 0, 0, {}});
      h = b.out_h;
      w = b.out_w;
    }
  };
  if (use_time) add_branch("time", impl_->time_branch);
  if (use_freq) add_branch("freq", impl_->freq_branch);
  table_.push_back({"head.fc1", OpKind::FC, 0, 1, 1, impl_->fc1.w.size(),
                    static_cast<long long>(fused) * spec.head_hidden, impl_->fc1.w.shape});
  table_.push_back({"head.fc1.bias", OpKind::FC, 0, 1, 1, impl_->fc1.b.size(), 0,
                    impl_->fc1.b.shape});
  table_.push_back({"head.relu", OpKind::ReLU, 0, 1, 1, 0, 0, {}});
  table_.push_back({"head.fc2", OpKind::FC, 0, 1, 1, impl_->fc2.w.size(),
                    static_cast<long long>(spec.head_hidden) * spec.num_classes,
                    impl_->fc2.w.shape});
  table_.push_back({"head.fc2.bias", OpKind::FC, 0, 1, 1, impl_->fc2.b.size(), 0,
                    impl_->fc2.b.shape});
  table_.push_back({"head.softmax", OpKind::Softmax, 0, 1, 1, 0, 0, {}});
}

template <typename T>
std::vector<T> Network<T>::forward(const Tensor<T>& time_in, const Tensor<T>& freq_in) {
  Impl& im = *impl_;
  std::vector<T> fused;
  if (im.mode != BranchMode::FreqOnly) {
    Tensor<T> f = im.time_branch.forward(time_in);
    im.time_feat = f.data;
    fused.insert(fused.end(), f.data.begin(), f.data.end());
  }
  if (im.mode != BranchMode::TimeOnly) {
    Tensor<T> f = im.freq_branch.forward(freq_in);
    im.freq_feat = f.data;
    fused.insert(fused.end(), f.data.begin(), f.data.end());
  }

  im.hidden_pre = im.fc1.forward(fused);
  im.hidden_post.resize(im.hidden_pre.size());
  kern::relu(im.hidden_post.data(), im.hidden_pre.data(), im.hidden_pre.size());
  std::vector<T> logits = im.fc2.forward(im.hidden_post);
  im.probs = softmax(logits);
  return im.probs;
}

template <typename T>
T Network<T>::loss_and_grad(const Tensor<T>& time_in, const Tensor<T>& freq_in, int label) {
  Impl& im = *impl_;
  std::vector<T> probs = forward(time_in, freq_in);
  const T loss = cross_entropy(probs, label);

  // d(cross entropy over softmax)/d logits = p - y
  std::vector<T> dlogits = probs;
  dlogits[static_cast<std::size_t>(label)] -= T(1);

  std::vector<T> dhidden_post = im.fc2.backward(dlogits);
  std::vector<T> dhidden_pre(dhidden_post.size());
  kern::relu_grad(dhidden_pre.data(), dhidden_post.data(), im.hidden_pre.data(),
                  dhidden_pre.size());
  std::vector<T> dfused = im.fc1.backward(dhidden_pre);

  std::size_t off = 0;
  if (im.mode != BranchMode::FreqOnly) {
    const Branch<T>& br = im.time_branch;
    Tensor<T> d({br.out_h, br.out_w, br.out_c});
    std::copy(dfused.begin() + static_cast<long>(off),
              dfused.begin() + static_cast<long>(off + d.size()), d.data.begin());
    off += d.size();
    im.time_branch.backward(d);
  }
  if (im.mode != BranchMode::TimeOnly) {
    const Branch<T>& br = im.freq_branch;
    Tensor<T> d({br.out_h, br.out_w, br.out_c});
    std::copy(dfused.begin() + static_cast<long>(off),
              dfused.begin() + static_cast<long>(off + d.size()), d.data.begin());
    im.freq_branch.backward(d);
  }
  return loss;
}

template <typename T>
void Network<T>::zero_grad() {
  Impl& im = *impl_;
  if (im.mode != BranchMode::FreqOnly)
    for (auto& b : im.time_branch.blocks) b.zero_grad();
  if (im.mode != BranchMode::TimeOnly)
    for (auto& b : im.freq_branch.blocks) b.zero_grad();
  if (im.fc1.g.data.empty()) {
    im.fc1.g = Tensor<T>(im.fc1.w.shape);
    im.fc1.gb = Tensor<T>(im.fc1.b.shape);
    im.fc2.g = Tensor<T>(im.fc2.w.shape);
    im.fc2.gb = Tensor<T>(im.fc2.b.shape);
    return;
  }
  im.fc1.g.fill(T(0));
  im.fc1.gb.fill(T(0));
  im.fc2.g.fill(T(0));
  im.fc2.gb.fill(T(0));
}

template <typename T>
std::vector<typename Network<T>::View> Network<T>::views() {
  Impl& im = *impl_;
  std::vector<View> out;
  auto add = [&out](Tensor<T>& w, Tensor<T>& g) {
    out.push_back({w.data.data(), g.data.data(), w.size()});
  };
  auto add_branch = [&](Branch<T>& br) {
    for (auto& b : br.blocks) {
      add(b.reduce.w, b.reduce.g);
      add(b.dw.w, b.dw.g);
      add(b.pw.w, b.pw.g);
      add(b.merge.w, b.merge.g);
    }
  };
  if (im.mode != BranchMode::FreqOnly) add_branch(im.time_branch);
  if (im.mode != BranchMode::TimeOnly) add_branch(im.freq_branch);
  add(im.fc1.w, im.fc1.g);
  add(im.fc1.b, im.fc1.gb);
  add(im.fc2.w, im.fc2.g);
  add(im.fc2.b, im.fc2.gb);
  return out;
}

template <typename T>
std::size_t Network<T>::param_count() const {
  std::size_t n = 0;
  for (const LayerInfo& row : table_) n += row.params;
  return n;
}

template <typename T>
long long Network<T>::flop_count() const {
  long long macs = 0;
  for (const LayerInfo& row : table_) macs += row.macs;
  return 2 * macs;
}

template <typename T>
const std::vector<T>& Network<T>::time_features() const {
  return impl_->time_feat;
}

template <typename T>
const std::vector<T>& Network<T>::freq_features() const {
  return impl_->freq_feat;
}

template <typename T>
std::vector<T> Network<T>::flat_weights() const {
  auto vs = const_cast<Network<T>*>(this)->views();
  std::vector<T> out;
  for (const View& v : vs) out.insert(out.end(), v.w, v.w + v.n);
  return out;
}

template <typename T>
void Network<T>::set_flat_weights(const std::vector<T>& w) {
  auto vs = views();
  std::size_t off = 0;
  for (View& v : vs) {
    require(off + v.n <= w.size(), "set_flat_weights: size mismatch");
    std::copy(w.begin() + static_cast<long>(off), w.begin() + static_cast<long>(off + v.n), v.w);
    off += v.n;
  }
  require(off == w.size(), "set_flat_weights: size mismatch");
}

template class Network<float>;
template class Network<double>;

}  // namespace uwbhar::nn
