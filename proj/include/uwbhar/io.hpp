// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "uwbhar/features.hpp"
#include "uwbhar/net.hpp"
#include "uwbhar/sim.hpp"

namespace uwbhar::io {

// Frame-matrix container, little-endian throughout:
//   magic "UWBF", u16 version, u32 K, u32 L,
//   f64 frame_period_s, carrier_freq_hz, bandwidth_hz, adc_interval_s,
//   then K*L complex samples as f32 (re, im) pairs, slow-time major.
// Version 1 carries complex frames. Version 2 inserts a u16 kind flag after
// the version (1 = time, 2 = doppler) and stores real f32 samples; it is the
// spectrogram flavor of the same container.
void write_frames(const std::string& path, const sim::FrameMatrix& frames);
sim::FrameMatrix read_frames(const std::string& path);

void write_spectrogram(const std::string& path, const features::Spectrogram& spec,
                       const sim::RadioConfig& radio, double frame_period_s);
features::Spectrogram read_spectrogram(const std::string& path);

// Network weights:
//   magic "SANW", u16 version, u32 entry count,
//   per entry: u8 op_kind, u8 rank, u32 dims[rank],
//   then all weights as little-endian f32 in declaration order.
void save_weights(const std::string& path, nn::Network<float>& net);
void load_weights(const std::string& path, nn::Network<float>& net);

// Dataset manifest: one "stem,label,environment_id,split" line per sample.
struct ManifestRow {
  std::string stem;
  std::string label;
  int environment = 0;
  std::string split;  // "train" | "test"
};
void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace uwbhar::io
