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

#ifndef HIRIS_IMAGING_HPP
#define HIRIS_IMAGING_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hiris/beamform.hpp"
#include "hiris/geometry.hpp"
#include "hiris/sampling.hpp"
#include "hiris/signals.hpp"
#include "hiris/spectral.hpp"

namespace hiris::imaging {

using geometry::ArrayGeometry;
using geometry::Direction;
using geometry::Medium;
using sampling::DirectionSet;
using spectral::ObservationMatrix;

enum class Scale { linear, db };

/// Range x azimuth grid; power index = range_index * azimuths.size() + azimuth_index.
struct PolarAxes {
  std::vector<double> ranges_m;
  std::vector<double> azimuths_deg;
};

struct AcousticImage {
  std::variant<DirectionSet, PolarAxes> axes;
  std::vector<double> power;
  Scale scale = Scale::linear;
  double floor_db = -std::numeric_limits<double>::infinity();

  bool direction_indexed() const { return std::holds_alternative<DirectionSet>(axes); }
  const DirectionSet& directions() const { return std::get<DirectionSet>(axes); }
  const PolarAxes& polar() const { return std::get<PolarAxes>(axes); }
  std::size_t pixel_count() const;
};

/// Pixel count matches the axes and every value is finite; dB images peak
/// at exactly 0 dB.
void validate(const AcousticImage& img);

/// 10 log10(p / max), clipped at floor_db.
AcousticImage to_db(const AcousticImage& img, double floor_db);

/// Linear power of pixel i regardless of the image scale.
double linear_power(const AcousticImage& img, std::size_t i);

std::size_t peak_index(const AcousticImage& img);

/// Peak-to-sidelobe ratio in dB: peak over the largest pixel farther than
/// exclusion_deg (great circle) from the peak.
double pslr(const AcousticImage& img, double exclusion_deg);

/// Single narrowband array snapshot: sum_k a(d_k) exp(j phi_k) plus
/// circular white Gaussian noise of variance 10^(-snr/10) per element. Source
/// phases phi_k and the noise are drawn from seed.
ObservationMatrix narrowband_snapshot(const ArrayGeometry& g, const Medium& m, double frequency,
                                      std::span<const Direction> sources, double snr_db,
                                      std::uint64_t seed);

struct PsfParams {
  Direction source;
  double frequency = 42e3;
  double snr_db = 5.0;
  beamform::SpatialFilterParams filter;
  std::uint64_t seed = 0;
  double exclusion_deg = 5.0;
};

struct PsfReport {
  AcousticImage image;
  Direction true_direction;
  Direction peak_direction;
  double peak_error_deg = 0.0;
  double pslr_db = 0.0;
  double mainlobe_exclusion_deg = 5.0;
  double frequency = 0.0;
  bool above_alias_limit = false;  // frequency exceeds v / (2 d)
};

PsfReport simulate_psf(const ArrayGeometry& g, const Medium& m, const DirectionSet& ds,
                       const PsfParams& params);

struct PipelineParams {
  std::size_t window_length = 256;
  std::size_t hop = 64;
  double f_target = 42e3;
  beamform::SpatialFilterParams filter;
  std::optional<std::size_t> frame;  // passive imaging frame; strongest if unset
};

struct ScanParams {
  double start_deg = -90.0;
  double end_deg = 90.0;
  double step_deg = 1.0;
};

/// Horizontal-plane image from one snapshot.
AcousticImage image_2d(const ObservationMatrix& obs, const ArrayGeometry& g, const Medium& m,
                       const beamform::SpatialFilterParams& filter, const ScanParams& scan = {});

/// Passive pipeline: matched filter against a dirac (identity), STFT cell at
/// f_target, then image_2d.
AcousticImage image_2d(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                       const PipelineParams& params, const ScanParams& scan = {});

/// Front-hemisphere image over an equal-area partition of about n cells.
AcousticImage image_3d(const ObservationMatrix& obs, const ArrayGeometry& g, const Medium& m,
                       const beamform::SpatialFilterParams& filter, std::size_t n_directions);

AcousticImage image_3d(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                       const PipelineParams& params, std::size_t n_directions);

struct CartesianRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  double pixel_pitch_m = 0.0;
  double x_min_m = 0.0;  // left edge; x grows to the right
  double y_min_m = 0.0;  // near edge; y grows away from the array
  std::vector<double> values;  // row-major, row 0 nearest the array
};

struct BmodeParams {
  PipelineParams pipeline;
  double range_min_m = 0.0;
  double range_max_m = std::numeric_limits<double>::infinity();
  double pixel_pitch_m = 0.01;
};

struct BmodeImage {
  AcousticImage polar;
  CartesianRaster cartesian;
};

/// Active pipeline: matched filter with the emission, then one snapshot and
/// spatial spectrum per STFT frame; frame centre time t maps to range v t / 2.
BmodeImage bmode(const WaveformSet& w, std::span<const double> base, const ArrayGeometry& g,
                 const Medium& m, const BmodeParams& params, const DirectionSet& ds);

/// Nearest-neighbour resampling of a polar image onto x = r sin(az),
/// y = r cos(az). Pixels outside the imaged sector take the image minimum.
CartesianRaster to_cartesian(const AcousticImage& polar, double pixel_pitch_m);

}  // namespace hiris::imaging

#endif  // HIRIS_IMAGING_HPP
