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

#ifndef HIRIS_CONFIG_HPP
#define HIRIS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hiris/beamform.hpp"
#include "hiris/geometry.hpp"
#include "hiris/synth.hpp"

namespace hiris::config {

struct ArraySection {
  std::size_t rows = 32;
  std::size_t cols = 32;
  double pitch_m = 3.9e-3;
};

struct PdmSection {
  double rate = 4.5e6;
  int order = 2;
  double dither = 0.0;
  double input_peak = 0.5;  // synth scales the scene to this peak before modulation
  double cutoff = 100e3;
  double transition = 50e3;
  double stopband_db = 80.0;
  std::size_t decimation = 10;
};

struct StftSection {
  std::size_t window_length = 256;
  std::size_t hop = 64;
  double f_target = 42e3;
  long long frame = -1;  // -1 selects the strongest frame
};

struct BeamformSection {
  beamform::Kind kind = beamform::Kind::mvdr;
  std::size_t sub_rows = 28;
  std::size_t sub_cols = 28;
  bool forward_backward = true;
  double loading = 0.1;
  beamform::PowerEstimator estimator = beamform::PowerEstimator::averaged_output;
  double exclusion_deg = 5.0;
  std::string grid = "azel";  // psf grid: azel, eq or scan
  double scan_start = -90.0;
  double scan_end = 90.0;
  double scan_step = 1.0;
  double el_start = -90.0;  // azel grid elevation bounds
  double el_end = 90.0;
  std::size_t n_directions = 1000;
  bool hemisphere = false;  // eqgrid only; image3d always images the front hemisphere
};

struct SceneSection {
  std::string mode = "passive";  // passive: sources, active: reflectors
  double azimuth = 0.0;
  double elevation = 0.0;
  double range = synth::kInfinite;  // source range; reflector range in active mode
  double level = 1.0;
  std::string extra = "";  // "az:el[:range[:level]];..." further sources or reflectors
  // Unset ("auto"): tone when passive, hyperbolic chirp when active.
  std::optional<synth::WaveformKind> waveform;
  double tone_frequency = 42e3;
  double f_start = 45e3;  // chirp band edges
  double f_end = 25e3;
  double waveform_duration = 2e-3;  // chirp, dirac and active-tone length
  double sample_rate = 450e3;
  double duration = 10e-3;
  double snr_db = 5.0;
  std::uint64_t seed = 0;
};

struct OutputSection {
  std::string path = "hiris_out";
  std::string format = "capture";  // synth output: capture or pcm
  double floor_db = -60.0;
  double pixel_pitch_m = 0.01;
  double range_min_m = 0.0;
  double range_max_m = synth::kInfinite;
};

struct RunConfig {
  ArraySection array;
  geometry::Medium medium;
  PdmSection pdm;
  StftSection stft;
  BeamformSection beamform;
  SceneSection scene;
  OutputSection output;

  geometry::ArrayGeometry geometry() const { return {array.rows, array.cols, array.pitch_m}; }
  beamform::SpatialFilterParams filter() const;
  synth::WaveformDescriptor waveform() const;
  std::vector<synth::SourceSpec> sources() const;
  std::vector<synth::Reflector> reflectors() const;
};

/// Every accepted key as "section.key", in file order.
const std::vector<std::string>& keys();

/// Sets one key from its text form. Throws ValidationError for unknown keys
/// and malformed values.
void set_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
std::string get_value(const RunConfig& cfg, const std::string& dotted_key);

/// Cross-checks every section against the module preconditions.
void validate(const RunConfig& cfg);

/// INI text with the sections [array] [medium] [pdm] [stft] [beamform]
/// [scene] [output]. Unknown sections or keys are rejected.
RunConfig parse(std::istream& is);
RunConfig load(const std::filesystem::path& path);
void write(const RunConfig& cfg, std::ostream& os);

}  // namespace hiris::config

#endif  // HIRIS_CONFIG_HPP
