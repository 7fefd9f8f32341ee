// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uwbhar::io {

namespace {

void fail(const std::string& msg) { throw std::runtime_error(msg); }

struct Writer {
  std::ofstream out;
  explicit Writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) fail("io: cannot open for writing: " + path);
  }
  void bytes(const void* p, std::size_t n) { out.write(static_cast<const char*>(p), n); }
  void u16(std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    bytes(b, 2);
  }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 4);
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void f32(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u32(u);
  }
  void f64(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    bytes(b, 8);
  }
};

struct Reader {
  std::ifstream in;
  std::string path;
  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) fail("io: cannot open for reading: " + p);
  }
  void bytes(void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) fail("io: truncated file: " + path);
  }
  std::uint16_t u16() {
    unsigned char b[2];
    bytes(b, 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(b, 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  float f32() {
    std::uint32_t u = u32();
    float v;
    std::memcpy(&v, &u, 4);
    return v;
  }
  double f64() {
    std::uint64_t u = 0;
    unsigned char b[8];
    bytes(b, 8);
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
};

constexpr char kFrameMagic[4] = {'U', 'W', 'B', 'F'};
constexpr char kWeightMagic[4] = {'S', 'A', 'N', 'W'};

void write_container_header(Writer& w, std::uint16_t version, std::uint16_t kind,
                            std::uint32_t rows, std::uint32_t cols, double frame_period,
                            const sim::RadioConfig& radio) {
  w.bytes(kFrameMagic, 4);
  w.u16(version);
  if (version >= 2) w.u16(kind);
  w.u32(rows);
  w.u32(cols);
  w.f64(frame_period);
  w.f64(radio.carrier_freq_hz);
  w.f64(radio.bandwidth_hz);
  w.f64(radio.adc_interval_s);
}

}  // namespace

void write_frames(const std::string& path, const sim::FrameMatrix& frames) {
  frames.validate();
  Writer w(path);
  write_container_header(w, 1, 0, static_cast<std::uint32_t>(frames.num_frames),
                         static_cast<std::uint32_t>(frames.num_bins), frames.frame_period_s,
                         frames.radio);
  for (const sim::cplx& z : frames.data) {
    w.f32(static_cast<float>(z.real()));
    w.f32(static_cast<float>(z.imag()));
  }
  if (!w.out) fail("io: write failed: " + path);
}

sim::FrameMatrix read_frames(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kFrameMagic, 4) != 0) fail("io: not a frame container: " + path);
  const std::uint16_t version = r.u16();
  if (version != 1) fail("io: unsupported frame container version: " + path);
  const std::uint32_t K = r.u32();
  const std::uint32_t L = r.u32();

  sim::FrameMatrix m;
  m.frame_period_s = r.f64();
  m.radio.carrier_freq_hz = r.f64();
  m.radio.bandwidth_hz = r.f64();
  m.radio.adc_interval_s = r.f64();
  m.radio.pulse_repetition_hz = 1.0 / m.frame_period_s;
  m.radio.fast_time_bins = static_cast<int>(L);
  m.num_frames = K;
  m.num_bins = L;
  m.data.resize(static_cast<std::size_t>(K) * L);
  for (sim::cplx& z : m.data) {
    const double re = r.f32();
    const double im = r.f32();
    z = sim::cplx(re, im);
  }
  m.validate();
  return m;
}

void write_spectrogram(const std::string& path, const features::Spectrogram& spec,
                       const sim::RadioConfig& radio, double frame_period_s) {
  spec.validate();
  Writer w(path);
  const std::uint16_t kind = spec.kind == features::SpectrogramKind::TimeDomain ? 1 : 2;
  write_container_header(w, 2, kind, static_cast<std::uint32_t>(spec.rows),
                         static_cast<std::uint32_t>(spec.cols), frame_period_s, radio);
  for (double v : spec.data) w.f32(static_cast<float>(v));
  if (!w.out) fail("io: write failed: " + path);
}

features::Spectrogram read_spectrogram(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kFrameMagic, 4) != 0) fail("io: not a frame container: " + path);
  const std::uint16_t version = r.u16();
  if (version != 2) fail("io: not a spectrogram container: " + path);
  const std::uint16_t kind = r.u16();
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  r.f64();  // frame period
  r.f64();  // carrier
  r.f64();  // bandwidth
  r.f64();  // adc interval

  features::Spectrogram s;
  s.rows = static_cast<int>(rows);
  s.cols = static_cast<int>(cols);
  s.kind = kind == 1 ? features::SpectrogramKind::TimeDomain
                     : features::SpectrogramKind::DopplerDomain;
  s.normalization = features::Normalization::ZScore;
  s.data.resize(static_cast<std::size_t>(rows) * cols);
  for (double& v : s.data) v = r.f32();
  return s;
}

void save_weights(const std::string& path, nn::Network<float>& net) {
  Writer w(path);
  w.bytes(kWeightMagic, 4);
  w.u16(1);

  std::vector<const nn::LayerInfo*> weighted;
  for (const nn::LayerInfo& row : net.layer_table())
    if (!row.weight_shape.empty()) weighted.push_back(&row);
  w.u32(static_cast<std::uint32_t>(weighted.size()));
  for (const nn::LayerInfo* row : weighted) {
    w.u8(static_cast<std::uint8_t>(row->kind));
    w.u8(static_cast<std::uint8_t>(row->weight_shape.size()));
    for (int d : row->weight_shape) w.u32(static_cast<std::uint32_t>(d));
  }
  for (const auto& v : net.views())
    for (std::size_t i = 0; i < v.n; ++i) w.f32(v.w[i]);
  if (!w.out) fail("io: write failed: " + path);
}

void load_weights(const std::string& path, nn::Network<float>& net) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kWeightMagic, 4) != 0) fail("io: not a weights file: " + path);
  if (r.u16() != 1) fail("io: unsupported weights version: " + path);

  std::vector<const nn::LayerInfo*> weighted;
  for (const nn::LayerInfo& row : net.layer_table())
    if (!row.weight_shape.empty()) weighted.push_back(&row);

  const std::uint32_t entries = r.u32();
  if (entries != weighted.size()) fail("io: weights layer table mismatch: " + path);
  for (const nn::LayerInfo* row : weighted) {
    if (r.u8() != static_cast<std::uint8_t>(row->kind))
      fail("io: weights kind mismatch: " + path);
    const std::uint8_t rank = r.u8();
    if (rank != row->weight_shape.size()) fail("io: weights rank mismatch: " + path);
    for (int d : row->weight_shape)
      if (r.u32() != static_cast<std::uint32_t>(d)) fail("io: weights shape mismatch: " + path);
  }
  for (auto& v : net.views())
    for (std::size_t i = 0; i < v.n; ++i) v.w[i] = r.f32();
}

void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows) {
  std::string out;
  for (const ManifestRow& row : rows) {
    out += row.stem;
    out += ',';
    out += row.label;
    out += ',';
    out += std::to_string(row.environment);
    out += ',';
    out += row.split;
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<ManifestRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ManifestRow row;
    std::string env;
    if (!std::getline(ls, row.stem, ',') || !std::getline(ls, row.label, ',') ||
        !std::getline(ls, env, ',') || !std::getline(ls, row.split))
      fail("io: malformed manifest line: " + line);
    row.environment = std::stoi(env);
    rows.push_back(row);
  }
  return rows;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("io: cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail("io: write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("io: cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace uwbhar::io
