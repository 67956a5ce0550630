// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The hiris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HIRIS_IO_HPP
#define HIRIS_IO_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hiris/error.hpp"
#include "hiris/geometry.hpp"
#include "hiris/imaging.hpp"
#include "hiris/signals.hpp"

namespace hiris::io {

enum class FormatErrorKind { bad_magic, unsupported_version, truncated, inconsistent };

class FormatError : public ValidationError {
 public:
  FormatError(FormatErrorKind kind, const std::string& what)
      : ValidationError(what), kind_(kind) {}
  FormatErrorKind kind() const { return kind_; }

 private:
  FormatErrorKind kind_;
};

// Capture container "HAC1", little-endian:
//   char[4] magic, u32 version, u32 rows, u32 cols, f64 pitch_m,
//   f64 pdm_rate, u64 n_ticks, then n_ticks blocks of ceil(rows*cols/8)
//   bytes. Microphone k = row*cols + col is bit k%8 of byte k/8.
inline constexpr std::uint32_t kCaptureVersion = 1;
inline constexpr std::size_t kCaptureHeaderBytes = 40;

struct Capture {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch_m = 0.0;
  PdmStream stream;

  geometry::ArrayGeometry geometry() const { return {rows, cols, pitch_m}; }
};

std::size_t capture_payload_bytes(std::size_t channels, std::size_t ticks);

void write_capture(std::ostream& os, const PdmStream& p, const geometry::ArrayGeometry& g);
void write_capture(const std::filesystem::path& path, const PdmStream& p,
                   const geometry::ArrayGeometry& g);
Capture read_capture(std::istream& is);
Capture read_capture(const std::filesystem::path& path);

// PCM container "HPW1", little-endian:
//   char[4] magic, u32 version, u32 channels, u64 length, f64 sample_rate,
//   then channels*length f32 samples, channel-interleaved.
inline constexpr std::uint32_t kPcmVersion = 1;
inline constexpr std::size_t kPcmHeaderBytes = 28;

void write_pcm(std::ostream& os, const WaveformSet& w);
void write_pcm(const std::filesystem::path& path, const WaveformSet& w);
WaveformSet read_pcm(std::istream& is);
WaveformSet read_pcm(const std::filesystem::path& path);

// Node dumps. Each acquisition node serves 32 microphones through 16 pins
// sampled on both clock edges. A dump is a stream of 16-bit little-endian
// words, two per tick: the rising-edge word (bit k = local microphone 2k)
// then the falling-edge word (bit k = local microphone 2k + 1).
inline constexpr std::size_t kMicsPerNode = 32;

/// global[node][local] = row-major microphone index.
struct NodeLayout {
  std::vector<std::array<std::size_t, kMicsPerNode>> global;
  std::size_t nodes() const { return global.size(); }
};

/// global = node * 32 + local.
NodeLayout identity_layout(std::size_t nodes);
/// CSV with header node,local,global; every (node, local) exactly once and
/// no global index repeated.
NodeLayout read_layout_csv(std::istream& is);
void write_layout_csv(const NodeLayout& layout, std::ostream& os);
void validate(const NodeLayout& layout);

using NodeWords = std::vector<std::uint16_t>;

PdmStream convert_node_words(std::span<const NodeWords> nodes, const NodeLayout& layout,
                             double pdm_rate);
std::vector<NodeWords> split_node_words(const PdmStream& p, const NodeLayout& layout);

NodeWords read_node_dump(const std::filesystem::path& path);
void write_node_dump(const std::filesystem::path& path, const NodeWords& words);
PdmStream convert_node_dumps(std::span<const std::filesystem::path> paths,
                             const NodeLayout& layout, double pdm_rate);

/// Direction images: azimuth_deg,elevation_deg,value. Polar images:
/// range_m,azimuth_deg,value.
void write_image_csv(const imaging::AcousticImage& img, std::ostream& os);

struct RasterHeader {
  std::size_t width = 0;
  std::size_t height = 0;
  std::string scale;   // "linear" or "db"
  double floor_db = 0.0;
  double min_value = 0.0;  // value mapped to code 0
  double max_value = 0.0;  // value mapped to code 65535
};

/// Linear map of [min, max] onto 0..65535, row-major, little-endian.
std::vector<std::uint16_t> quantize_raster(std::span<const double> values, double min_value,
                                           double max_value);

/// Writes <stem>.raw (u16 samples) and <stem>.hdr (key=value lines).
void write_raster(const std::filesystem::path& stem, std::span<const double> values,
                  const RasterHeader& header);
RasterHeader read_raster_header(const std::filesystem::path& hdr_path);

/// Raster shape of an image: the grid shape for regular direction grids,
/// range x azimuth for polar images, otherwise a single row.
RasterHeader raster_header(const imaging::AcousticImage& img);

void write_psf_report(const imaging::PsfReport& report, std::ostream& os);

}  // namespace hiris::io

#endif  // HIRIS_IO_HPP
