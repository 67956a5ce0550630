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

#include "hiris/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hiris::io {
namespace {

constexpr char kCaptureMagic[4] = {'H', 'A', 'C', '1'};
constexpr char kPcmMagic[4] = {'H', 'P', 'W', '1'};

template <typename T>
void put(std::string& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

template <typename T>
T get(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(U{p[i]} << (8 * i));
  return std::bit_cast<T>(bits);
}

void read_exact(std::istream& is, unsigned char* dst, std::size_t n, const char* what) {
  is.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    throw FormatError(FormatErrorKind::truncated, std::string("truncated ") + what);
}

void expect_end(std::istream& is, const char* what) {
  if (is.peek() != std::char_traits<char>::eof())
    throw FormatError(FormatErrorKind::inconsistent,
                      std::string(what) + " has trailing bytes after the payload");
}

void check_magic(const unsigned char* p, const char (&magic)[4], const char* what) {
  if (std::memcmp(p, magic, 4) != 0)
    throw FormatError(FormatErrorKind::bad_magic, std::string("not a ") + what + " (bad magic)");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ProcessingError("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path.string());
  return is;
}

void flush(std::ostream& os, const std::string& buf) {
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw ProcessingError("write failed");
}

}  // namespace

std::size_t capture_payload_bytes(std::size_t channels, std::size_t ticks) {
  return ticks * ((channels + 7) / 8);
}

void write_capture(std::ostream& os, const PdmStream& p, const geometry::ArrayGeometry& g) {
  require(p.channels() == g.size(), "stream channel count does not match the array");
  require(p.pdm_rate() > 0.0, "PDM rate must be positive");
  std::string buf;
  buf.append(kCaptureMagic, 4);
  put(buf, kCaptureVersion);
  put(buf, static_cast<std::uint32_t>(g.rows()));
  put(buf, static_cast<std::uint32_t>(g.cols()));
  put(buf, g.pitch());
  put(buf, p.pdm_rate());
  put(buf, static_cast<std::uint64_t>(p.ticks()));
  flush(os, buf);

  // 64 ticks at a time: one word per channel becomes 64 tick rows.
  const std::size_t row_bytes = (p.channels() + 7) / 8;
  std::string block;
  for (std::size_t w = 0; w < p.words_per_channel(); ++w) {
    const std::size_t t0 = w * 64;
    const std::size_t n = std::min<std::size_t>(64, p.ticks() - t0);
    block.assign(n * row_bytes, '\0');
    for (std::size_t c = 0; c < p.channels(); ++c) {
      std::uint64_t word = p.channel_words(c)[w];
      const auto mask = static_cast<char>(1u << (c % 8));
      const std::size_t byte = c / 8;
      while (word != 0) {
        const auto t = static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        if (t < n) block[t * row_bytes + byte] |= mask;
      }
    }
    flush(os, block);
  }
}

void write_capture(const std::filesystem::path& path, const PdmStream& p,
                   const geometry::ArrayGeometry& g) {
  auto os = open_out(path);
  write_capture(os, p, g);
}

Capture read_capture(std::istream& is) {
  unsigned char h[kCaptureHeaderBytes];
  read_exact(is, h, 4, "capture header");
  check_magic(h, kCaptureMagic, "capture container");
  read_exact(is, h + 4, kCaptureHeaderBytes - 4, "capture header");
  const auto version = get<std::uint32_t>(h + 4);
  if (version != kCaptureVersion)
    throw FormatError(FormatErrorKind::unsupported_version,
                      "unsupported capture version " + std::to_string(version));
  Capture cap;
  cap.rows = get<std::uint32_t>(h + 8);
  cap.cols = get<std::uint32_t>(h + 12);
  cap.pitch_m = get<double>(h + 16);
  const double rate = get<double>(h + 24);
  const auto ticks = static_cast<std::size_t>(get<std::uint64_t>(h + 32));
  if (cap.rows == 0 || cap.cols == 0 || !(cap.pitch_m > 0.0) || !(rate > 0.0) ||
      !std::isfinite(cap.pitch_m) || !std::isfinite(rate))
    throw FormatError(FormatErrorKind::inconsistent, "capture header holds invalid values");

  const std::size_t channels = cap.rows * cap.cols;
  const std::size_t row_bytes = (channels + 7) / 8;
  cap.stream = PdmStream(rate, channels, ticks);
  std::vector<unsigned char> block(64 * row_bytes);
  for (std::size_t w = 0; w < cap.stream.words_per_channel(); ++w) {
    const std::size_t n = std::min<std::size_t>(64, ticks - w * 64);
    read_exact(is, block.data(), n * row_bytes, "capture payload");
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t byte = c / 8;
      const unsigned shift = c % 8;
      std::uint64_t word = 0;
      for (std::size_t t = 0; t < n; ++t)
        word |= static_cast<std::uint64_t>((block[t * row_bytes + byte] >> shift) & 1u) << t;
      cap.stream.channel_words(c)[w] = word;
    }
  }
  expect_end(is, "capture container");
  return cap;
}

Capture read_capture(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_capture(is);
}

void write_pcm(std::ostream& os, const WaveformSet& w) {
  require(w.channels > 0, "PCM container needs at least one channel");
  require(w.sample_rate > 0.0, "sample rate must be positive");
  require(w.samples.size() == w.channels * w.length, "waveform sample count mismatch");
  std::string buf;
  buf.append(kPcmMagic, 4);
  put(buf, kPcmVersion);
  put(buf, static_cast<std::uint32_t>(w.channels));
  put(buf, static_cast<std::uint64_t>(w.length));
  put(buf, w.sample_rate);
  flush(os, buf);
  buf.clear();
  buf.reserve(w.channels * 4 * 4096);
  for (std::size_t n = 0; n < w.length; ++n) {
    for (std::size_t c = 0; c < w.channels; ++c)
      put(buf, static_cast<float>(w.samples[c * w.length + n]));
    if (buf.size() >= w.channels * 4 * 4096) {
      flush(os, buf);
      buf.clear();
    }
  }
  flush(os, buf);
}

void write_pcm(const std::filesystem::path& path, const WaveformSet& w) {
  auto os = open_out(path);
  write_pcm(os, w);
}

WaveformSet read_pcm(std::istream& is) {
  unsigned char h[kPcmHeaderBytes];
  read_exact(is, h, 4, "PCM header");
  check_magic(h, kPcmMagic, "PCM container");
  read_exact(is, h + 4, kPcmHeaderBytes - 4, "PCM header");
  const auto version = get<std::uint32_t>(h + 4);
  if (version != kPcmVersion)
    throw FormatError(FormatErrorKind::unsupported_version,
                      "unsupported PCM version " + std::to_string(version));
  const std::size_t channels = get<std::uint32_t>(h + 8);
  const auto length = static_cast<std::size_t>(get<std::uint64_t>(h + 12));
  const double rate = get<double>(h + 20);
  if (channels == 0 || !(rate > 0.0) || !std::isfinite(rate))
    throw FormatError(FormatErrorKind::inconsistent, "PCM header holds invalid values");

  WaveformSet w(rate, channels, length);
  std::vector<unsigned char> frame(channels * 4);
  for (std::size_t n = 0; n < length; ++n) {
    read_exact(is, frame.data(), frame.size(), "PCM payload");
    for (std::size_t c = 0; c < channels; ++c)
      w.samples[c * length + n] = get<float>(frame.data() + 4 * c);
  }
  expect_end(is, "PCM container");
  return w;
}

WaveformSet read_pcm(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_pcm(is);
}

NodeLayout identity_layout(std::size_t nodes) {
  NodeLayout layout;
  layout.global.resize(nodes);
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t k = 0; k < kMicsPerNode; ++k) layout.global[n][k] = n * kMicsPerNode + k;
  return layout;
}

void validate(const NodeLayout& layout) {
  require(layout.nodes() > 0, "node layout is empty");
  const std::size_t total = layout.nodes() * kMicsPerNode;
  std::vector<bool> seen(total, false);
  for (const auto& node : layout.global) {
    for (std::size_t g : node) {
      require(g < total, "layout maps to a microphone index out of range");
      require(!seen[g], "layout maps two node inputs to microphone " + std::to_string(g));
      seen[g] = true;
    }
  }
}

NodeLayout read_layout_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "layout CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "node,local,global", "layout CSV header must be node,local,global");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> entries;
  std::size_t max_node = 0;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t node = 0, local = 0, global = 0;
    char c1 = 0, c2 = 0;
    ss >> node >> c1 >> local >> c2 >> global;
    require(ss && c1 == ',' && c2 == ',' && (ss >> std::ws).eof(),
            "malformed layout row at line " + std::to_string(line_no));
    require(local < kMicsPerNode, "layout local index out of range at line " + std::to_string(line_no));
    require(entries.emplace(std::pair{node, local}, global).second,
            "duplicate layout entry at line " + std::to_string(line_no));
    max_node = std::max(max_node, node);
  }
  require(!entries.empty(), "layout CSV has no rows");
  NodeLayout layout;
  layout.global.resize(max_node + 1);
  require(entries.size() == layout.nodes() * kMicsPerNode,
          "layout must list every local index of every node");
  for (const auto& [key, g] : entries) layout.global[key.first][key.second] = g;
  validate(layout);
  return layout;
}

void write_layout_csv(const NodeLayout& layout, std::ostream& os) {
  os << "node,local,global\n";
  for (std::size_t n = 0; n < layout.nodes(); ++n)
    for (std::size_t k = 0; k < kMicsPerNode; ++k)
      os << n << ',' << k << ',' << layout.global[n][k] << '\n';
}

PdmStream convert_node_words(std::span<const NodeWords> nodes, const NodeLayout& layout,
                             double pdm_rate) {
  validate(layout);
  require(nodes.size() == layout.nodes(), "node count does not match the layout");
  require(pdm_rate > 0.0, "PDM rate must be positive");
  const std::size_t words = nodes.front().size();
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    require(nodes[n].size() == words, "node dump " + std::to_string(n) + " length differs");
    require(nodes[n].size() % 2 == 0,
            "node dump " + std::to_string(n) + " ends in an incomplete tick");
  }
  const std::size_t ticks = words / 2;
  PdmStream p(pdm_rate, layout.nodes() * kMicsPerNode, ticks);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const NodeWords& src = nodes[n];
    for (std::size_t k = 0; k < kMicsPerNode; ++k) {
      const unsigned pin = static_cast<unsigned>(k / 2);
      const std::size_t edge = k % 2;  // 0 rising, 1 falling
      auto dst = p.channel_words(layout.global[n][k]);
      for (std::size_t t = 0; t < ticks; ++t) {
        const std::uint64_t b = (src[2 * t + edge] >> pin) & 1u;
        dst[t / 64] |= b << (t % 64);
      }
    }
  }
  return p;
}

std::vector<NodeWords> split_node_words(const PdmStream& p, const NodeLayout& layout) {
  validate(layout);
  require(p.channels() == layout.nodes() * kMicsPerNode,
          "stream channel count does not match the layout");
  std::vector<NodeWords> nodes(layout.nodes(), NodeWords(2 * p.ticks(), 0));
  for (std::size_t n = 0; n < layout.nodes(); ++n) {
    for (std::size_t k = 0; k < kMicsPerNode; ++k) {
      const std::size_t ch = layout.global[n][k];
      const auto bit = static_cast<std::uint16_t>(1u << (k / 2));
      for (std::size_t t = 0; t < p.ticks(); ++t)
        if (p.bit(ch, t)) nodes[n][2 * t + k % 2] |= bit;
    }
  }
  return nodes;
}

NodeWords read_node_dump(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  require(bytes.size() % 2 == 0, "node dump " + path.string() + " has an odd byte count");
  NodeWords words(bytes.size() / 2);
  for (std::size_t i = 0; i < words.size(); ++i)
    words[i] = get<std::uint16_t>(reinterpret_cast<const unsigned char*>(bytes.data()) + 2 * i);
  return words;
}

void write_node_dump(const std::filesystem::path& path, const NodeWords& words) {
  auto os = open_out(path);
  std::string buf;
  buf.reserve(words.size() * 2);
  for (std::uint16_t w : words) put(buf, w);
  flush(os, buf);
}

PdmStream convert_node_dumps(std::span<const std::filesystem::path> paths,
                             const NodeLayout& layout, double pdm_rate) {
  require(!paths.empty(), "no node dumps given");
  std::vector<NodeWords> nodes;
  nodes.reserve(paths.size());
  for (const auto& path : paths) nodes.push_back(read_node_dump(path));
  return convert_node_words(nodes, layout, pdm_rate);
}

void write_image_csv(const imaging::AcousticImage& img, std::ostream& os) {
  imaging::validate(img);
  os << std::setprecision(17);
  if (img.direction_indexed()) {
    os << "azimuth_deg,elevation_deg,value\n";
    const auto& ds = img.directions();
    for (std::size_t i = 0; i < ds.size(); ++i)
      os << ds.directions[i].azimuth_deg << ',' << ds.directions[i].elevation_deg << ','
         << img.power[i] << '\n';
  } else {
    os << "range_m,azimuth_deg,value\n";
    const auto& ax = img.polar();
    for (std::size_t r = 0; r < ax.ranges_m.size(); ++r)
      for (std::size_t a = 0; a < ax.azimuths_deg.size(); ++a)
        os << ax.ranges_m[r] << ',' << ax.azimuths_deg[a] << ','
           << img.power[r * ax.azimuths_deg.size() + a] << '\n';
  }
}

std::vector<std::uint16_t> quantize_raster(std::span<const double> values, double min_value,
                                           double max_value) {
  require(max_value > min_value, "raster range is empty");
  std::vector<std::uint16_t> out(values.size());
  const double scale = 65535.0 / (max_value - min_value);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp((values[i] - min_value) * scale, 0.0, 65535.0);
    out[i] = static_cast<std::uint16_t>(std::lround(v));
  }
  return out;
}

void write_raster(const std::filesystem::path& stem, std::span<const double> values,
                  const RasterHeader& header) {
  require(header.width * header.height == values.size(), "raster shape does not match values");
  const auto codes = quantize_raster(values, header.min_value, header.max_value);
  std::filesystem::path raw = stem;
  raw += ".raw";
  std::filesystem::path hdr = stem;
  hdr += ".hdr";
  {
    auto os = open_out(raw);
    std::string buf;
    buf.reserve(codes.size() * 2);
    for (std::uint16_t c : codes) put(buf, c);
    flush(os, buf);
  }
  std::ofstream os(hdr);
  if (!os) throw ProcessingError("cannot open " + hdr.string() + " for writing");
  os << std::setprecision(17) << "format=uint16le\n"
     << "width=" << header.width << "\nheight=" << header.height << "\nscale=" << header.scale
     << "\nfloor_db=" << header.floor_db << "\nmin_value=" << header.min_value
     << "\nmax_value=" << header.max_value << '\n';
}

RasterHeader read_raster_header(const std::filesystem::path& hdr_path) {
  std::ifstream is(hdr_path);
  require(static_cast<bool>(is), "cannot open " + hdr_path.string());
  RasterHeader h;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "width") h.width = std::stoull(value);
    else if (key == "height") h.height = std::stoull(value);
    else if (key == "scale") h.scale = value;
    else if (key == "floor_db") h.floor_db = std::stod(value);
    else if (key == "min_value") h.min_value = std::stod(value);
    else if (key == "max_value") h.max_value = std::stod(value);
  }
  return h;
}

RasterHeader raster_header(const imaging::AcousticImage& img) {
  imaging::validate(img);
  RasterHeader h;
  if (img.direction_indexed()) {
    const auto& ds = img.directions();
    if (ds.grid_rows * ds.grid_cols == ds.size() && ds.grid_rows > 0) {
      h.width = ds.grid_cols;
      h.height = ds.grid_rows;
    } else {
      h.width = ds.size();
      h.height = 1;
    }
  } else {
    h.width = img.polar().azimuths_deg.size();
    h.height = img.polar().ranges_m.size();
  }
  const auto [lo, hi] = std::minmax_element(img.power.begin(), img.power.end());
  if (img.scale == imaging::Scale::db) {
    h.scale = "db";
    h.floor_db = img.floor_db;
    h.min_value = std::isfinite(img.floor_db) ? img.floor_db : *lo;
    h.max_value = 0.0;
  } else {
    h.scale = "linear";
    h.floor_db = 0.0;
    h.min_value = 0.0;
    h.max_value = *hi;
  }
  if (!(h.max_value > h.min_value)) h.max_value = h.min_value + 1.0;
  return h;
}

void write_psf_report(const imaging::PsfReport& r, std::ostream& os) {
  os << std::setprecision(17)
     << "true_azimuth_deg=" << r.true_direction.azimuth_deg << '\n'
     << "true_elevation_deg=" << r.true_direction.elevation_deg << '\n'
     << "peak_azimuth_deg=" << r.peak_direction.azimuth_deg << '\n'
     << "peak_elevation_deg=" << r.peak_direction.elevation_deg << '\n'
     << "peak_error_deg=" << r.peak_error_deg << '\n'
     << "pslr_db=" << r.pslr_db << '\n'
     << "mainlobe_exclusion_deg=" << r.mainlobe_exclusion_deg << '\n'
     << "frequency_hz=" << r.frequency << '\n'
     << "above_alias_limit=" << (r.above_alias_limit ? 1 : 0) << '\n'
     << "directions=" << r.image.pixel_count() << '\n';
}

}  // namespace hiris::io
