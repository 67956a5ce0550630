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

#include "hiris/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hiris/error.hpp"
#include "hiris/pdm.hpp"

namespace hiris::config {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && end == t.data() + t.size() && !t.empty() && !std::isnan(v),
          key + ": expected a number, got '" + text + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  require(ec == std::errc() && end == t.data() + t.size() && !t.empty(),
          key + ": expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError(key + ": expected a boolean, got '" + text + "'");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct Entry {
  std::string key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Section>
Entry real(std::string key, Section RunConfig::*section, double Section::*field) {
  return {std::move(key),
          [=](RunConfig& c, const std::string& k, const std::string& v) {
            (c.*section).*field = parse_double(k, v);
          },
          [=](const RunConfig& c) { return format_double((c.*section).*field); }};
}

template <typename Section, typename Int>
Entry integer(std::string key, Section RunConfig::*section, Int Section::*field) {
  return {std::move(key),
          [=](RunConfig& c, const std::string& k, const std::string& v) {
            (c.*section).*field = parse_int<Int>(k, v);
          },
          [=](const RunConfig& c) { return std::to_string((c.*section).*field); }};
}

template <typename Section>
Entry boolean(std::string key, Section RunConfig::*section, bool Section::*field) {
  return {std::move(key),
          [=](RunConfig& c, const std::string& k, const std::string& v) {
            (c.*section).*field = parse_bool(k, v);
          },
          [=](const RunConfig& c) { return std::string((c.*section).*field ? "true" : "false"); }};
}

template <typename Section>
Entry text(std::string key, Section RunConfig::*section, std::string Section::*field) {
  return {std::move(key),
          [=](RunConfig& c, const std::string&, const std::string& v) {
            (c.*section).*field = trim(v);
          },
          [=](const RunConfig& c) { return (c.*section).*field; }};
}

template <typename Section, typename Enum>
Entry choice(std::string key, Section RunConfig::*section, Enum Section::*field,
             std::vector<std::pair<std::string, Enum>> names) {
  return {std::move(key),
          [=](RunConfig& c, const std::string& k, const std::string& v) {
            const std::string t = trim(v);
            std::string allowed;
            for (const auto& [name, value] : names) {
              if (name == t) {
                (c.*section).*field = value;
                return;
              }
              allowed += (allowed.empty() ? "" : ", ") + name;
            }
            throw ValidationError(k + ": expected one of " + allowed + ", got '" + v + "'");
          },
          [=](const RunConfig& c) {
            for (const auto& [name, value] : names)
              if (value == (c.*section).*field) return name;
            return std::string();
          }};
}

const std::vector<Entry>& registry() {
  using C = RunConfig;
  static const std::vector<Entry> entries = {
      integer("array.rows", &C::array, &ArraySection::rows),
      integer("array.cols", &C::array, &ArraySection::cols),
      real("array.pitch_m", &C::array, &ArraySection::pitch_m),
      real("medium.speed_of_sound", &C::medium, &geometry::Medium::speed_of_sound),
      real("pdm.rate", &C::pdm, &PdmSection::rate),
      integer("pdm.order", &C::pdm, &PdmSection::order),
      real("pdm.dither", &C::pdm, &PdmSection::dither),
      real("pdm.input_peak", &C::pdm, &PdmSection::input_peak),
      real("pdm.cutoff", &C::pdm, &PdmSection::cutoff),
      real("pdm.transition", &C::pdm, &PdmSection::transition),
      real("pdm.stopband_db", &C::pdm, &PdmSection::stopband_db),
      integer("pdm.decimation", &C::pdm, &PdmSection::decimation),
      integer("stft.window_length", &C::stft, &StftSection::window_length),
      integer("stft.hop", &C::stft, &StftSection::hop),
      real("stft.f_target", &C::stft, &StftSection::f_target),
      integer("stft.frame", &C::stft, &StftSection::frame),
      choice("beamform.kind", &C::beamform, &BeamformSection::kind,
             {{"mvdr", beamform::Kind::mvdr}, {"bartlett", beamform::Kind::bartlett}}),
      integer("beamform.sub_rows", &C::beamform, &BeamformSection::sub_rows),
      integer("beamform.sub_cols", &C::beamform, &BeamformSection::sub_cols),
      boolean("beamform.forward_backward", &C::beamform, &BeamformSection::forward_backward),
      real("beamform.loading", &C::beamform, &BeamformSection::loading),
      choice("beamform.estimator", &C::beamform, &BeamformSection::estimator,
             {{"averaged_output", beamform::PowerEstimator::averaged_output},
              {"capon", beamform::PowerEstimator::capon}}),
      real("beamform.exclusion_deg", &C::beamform, &BeamformSection::exclusion_deg),
      text("beamform.grid", &C::beamform, &BeamformSection::grid),
      real("beamform.scan_start", &C::beamform, &BeamformSection::scan_start),
      real("beamform.scan_end", &C::beamform, &BeamformSection::scan_end),
      real("beamform.scan_step", &C::beamform, &BeamformSection::scan_step),
      real("beamform.el_start", &C::beamform, &BeamformSection::el_start),
      real("beamform.el_end", &C::beamform, &BeamformSection::el_end),
      integer("beamform.n_directions", &C::beamform, &BeamformSection::n_directions),
      boolean("beamform.hemisphere", &C::beamform, &BeamformSection::hemisphere),
      text("scene.mode", &C::scene, &SceneSection::mode),
      real("scene.azimuth", &C::scene, &SceneSection::azimuth),
      real("scene.elevation", &C::scene, &SceneSection::elevation),
      real("scene.range", &C::scene, &SceneSection::range),
      real("scene.level", &C::scene, &SceneSection::level),
      text("scene.extra", &C::scene, &SceneSection::extra),
      choice("scene.waveform", &C::scene, &SceneSection::waveform,
             {{"auto", std::nullopt},
              {"tone", synth::WaveformKind::tone},
              {"hyperbolic_chirp", synth::WaveformKind::hyperbolic_chirp},
              {"dirac", synth::WaveformKind::dirac}}),
      real("scene.tone_frequency", &C::scene, &SceneSection::tone_frequency),
      real("scene.f_start", &C::scene, &SceneSection::f_start),
      real("scene.f_end", &C::scene, &SceneSection::f_end),
      real("scene.waveform_duration", &C::scene, &SceneSection::waveform_duration),
      real("scene.sample_rate", &C::scene, &SceneSection::sample_rate),
      real("scene.duration", &C::scene, &SceneSection::duration),
      real("scene.snr_db", &C::scene, &SceneSection::snr_db),
      integer("scene.seed", &C::scene, &SceneSection::seed),
      text("output.path", &C::output, &OutputSection::path),
      text("output.format", &C::output, &OutputSection::format),
      real("output.floor_db", &C::output, &OutputSection::floor_db),
      real("output.pixel_pitch_m", &C::output, &OutputSection::pixel_pitch_m),
      real("output.range_min_m", &C::output, &OutputSection::range_min_m),
      real("output.range_max_m", &C::output, &OutputSection::range_max_m),
  };
  return entries;
}

const Entry& find(const std::string& key) {
  for (const auto& e : registry())
    if (e.key == key) return e;
  throw ValidationError("unknown configuration key '" + key + "'");
}

struct ExtraItem {
  double az = 0.0;
  double el = 0.0;
  std::optional<double> range;
  std::optional<double> level;
};

std::vector<ExtraItem> parse_extra(const std::string& text) {
  std::vector<ExtraItem> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream is(item);
    std::string f;
    while (std::getline(is, f, ':')) fields.push_back(f);
    require(fields.size() >= 2 && fields.size() <= 4,
            "scene.extra: expected az:el[:range[:level]], got '" + item + "'");
    ExtraItem e;
    e.az = parse_double("scene.extra", fields[0]);
    e.el = parse_double("scene.extra", fields[1]);
    if (fields.size() > 2) e.range = parse_double("scene.extra", fields[2]);
    if (fields.size() > 3) e.level = parse_double("scene.extra", fields[3]);
    items.push_back(e);
  }
  return items;
}

}  // namespace

beamform::SpatialFilterParams RunConfig::filter() const {
  beamform::SpatialFilterParams p;
  p.kind = beamform.kind;
  p.smoothing.sub_rows = beamform.sub_rows;
  p.smoothing.sub_cols = beamform.sub_cols;
  p.smoothing.forward_backward = beamform.forward_backward;
  p.smoothing.loading = beamform.loading;
  p.estimator = beamform.estimator;
  return p;
}

synth::WaveformDescriptor RunConfig::waveform() const {
  const bool active = scene.mode == "active";
  synth::WaveformDescriptor w;
  w.kind = scene.waveform.value_or(active ? synth::WaveformKind::hyperbolic_chirp
                                          : synth::WaveformKind::tone);
  w.f_start = scene.f_start;
  w.f_end = scene.f_end;
  w.duration = scene.waveform_duration;
  if (w.kind == synth::WaveformKind::tone) {
    w.f_start = w.f_end = scene.tone_frequency;
    if (!active) w.duration = scene.duration;
  }
  return w;
}

std::vector<synth::SourceSpec> RunConfig::sources() const {
  std::vector<synth::SourceSpec> out;
  out.push_back({{scene.azimuth, scene.elevation}, scene.range, waveform(), scene.level});
  for (const auto& e : parse_extra(scene.extra))
    out.push_back({{e.az, e.el}, e.range.value_or(synth::kInfinite), waveform(),
                   e.level.value_or(scene.level)});
  return out;
}

std::vector<synth::Reflector> RunConfig::reflectors() const {
  const double range = std::isfinite(scene.range) ? scene.range : 1.0;
  std::vector<synth::Reflector> out;
  out.push_back({{scene.azimuth, scene.elevation}, range, scene.level});
  for (const auto& e : parse_extra(scene.extra))
    out.push_back({{e.az, e.el}, e.range.value_or(range), e.level.value_or(scene.level)});
  return out;
}

const std::vector<std::string>& keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.key);
    return v;
  }();
  return names;
}

void set_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  find(dotted_key).set(cfg, dotted_key, value);
}

std::string get_value(const RunConfig& cfg, const std::string& dotted_key) {
  return find(dotted_key).get(cfg);
}

void validate(const RunConfig& c) {
  const auto g = c.geometry();  // checks rows, cols, pitch
  geometry::validate(c.medium);

  require(c.pdm.rate > 0.0, "pdm.rate must be positive");
  require(c.pdm.order == 1 || c.pdm.order == 2, "pdm.order must be 1 or 2");
  require(c.pdm.dither >= 0.0, "pdm.dither must be >= 0");
  require(c.pdm.input_peak > 0.0 && c.pdm.input_peak <= synth::kPdmMaxInput,
          "pdm.input_peak must lie in (0, 0.9]");
  require(c.pdm.decimation >= 1, "pdm.decimation must be >= 1");
  pdm::design_lowpass(c.pdm.rate, c.pdm.cutoff, c.pdm.transition, c.pdm.stopband_db);
  require(c.pdm.cutoff < c.pdm.rate / (2.0 * static_cast<double>(c.pdm.decimation)),
          "pdm.cutoff must stay below the decimated Nyquist rate");

  require(c.stft.window_length >= 2, "stft.window_length must be >= 2");
  require(c.stft.hop >= 1, "stft.hop must be >= 1");
  require(c.stft.f_target > 0.0, "stft.f_target must be positive");
  require(c.stft.frame >= -1, "stft.frame must be -1 (strongest) or a frame index");

  const auto& b = c.beamform;
  require(b.sub_rows >= 1 && b.sub_rows <= g.rows() && b.sub_cols >= 1 && b.sub_cols <= g.cols(),
          "beamform subarray must fit inside the array");
  require(b.loading >= 0.0 && std::isfinite(b.loading), "beamform.loading must be >= 0");
  require(b.exclusion_deg >= 0.0, "beamform.exclusion_deg must be >= 0");
  require(b.grid == "azel" || b.grid == "eq" || b.grid == "scan",
          "beamform.grid must be azel, eq or scan");
  require(b.scan_step > 0.0 && b.scan_start <= b.scan_end, "beamform scan range is invalid");
  require(b.scan_start >= -180.0 && b.scan_end <= 180.0, "beamform scan must stay within +/-180");
  require(b.el_start >= -90.0 && b.el_end <= 90.0 && b.el_start <= b.el_end,
          "beamform elevation range is invalid");
  require(b.n_directions >= 1, "beamform.n_directions must be >= 1");

  const auto& s = c.scene;
  require(s.mode == "passive" || s.mode == "active", "scene.mode must be passive or active");
  require(s.sample_rate > 0.0, "scene.sample_rate must be positive");
  require(s.duration > 0.0, "scene.duration must be positive");
  require(s.level >= 0.0, "scene.level must be >= 0");
  require(s.range > 0.0, "scene.range must be positive");
  synth::validate(c.waveform(), s.sample_rate);
  if (s.mode == "passive") {
    for (const auto& src : c.sources()) {
      geometry::validate(src.direction);
      require(src.range > 0.0 && src.level >= 0.0, "scene.extra holds an invalid source");
    }
  } else {
    for (const auto& r : c.reflectors()) {
      geometry::validate(r.direction);
      require(r.range > 0.0 && r.reflectivity >= 0.0, "scene.extra holds an invalid reflector");
    }
  }

  const auto& o = c.output;
  require(!o.path.empty(), "output.path must not be empty");
  require(o.format == "capture" || o.format == "pcm", "output.format must be capture or pcm");
  require(o.floor_db < 0.0, "output.floor_db must be negative");
  require(o.pixel_pitch_m > 0.0, "output.pixel_pitch_m must be positive");
  require(o.range_min_m >= 0.0 && o.range_max_m > o.range_min_m, "output range window is empty");
}

RunConfig parse(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    require(body.data().empty(), "config: key '" + section + "' outside any section");
    static const char* const kSections[] = {"array", "medium", "pdm", "stft",
                                            "beamform", "scene", "output"};
    require(std::find(std::begin(kSections), std::end(kSections), section) != std::end(kSections),
            "config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) set_value(cfg, section + "." + key, value.data());
  }
  validate(cfg);
  return cfg;
}

RunConfig load(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "cannot open config " + path.string());
  return parse(is);
}

void write(const RunConfig& cfg, std::ostream& os) {
  std::string current;
  for (const auto& e : registry()) {
    const auto dot = e.key.find('.');
    const std::string section = e.key.substr(0, dot);
    if (section != current) {
      os << (current.empty() ? "" : "\n") << '[' << section << "]\n";
      current = section;
    }
    os << e.key.substr(dot + 1) << " = " << e.get(cfg) << '\n';
  }
}

}  // namespace hiris::config
