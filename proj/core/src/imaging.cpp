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

#include "hiris/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hiris/error.hpp"
#include "hiris/parallel.hpp"

namespace hiris::imaging {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

AcousticImage direction_image(DirectionSet ds, std::vector<double> power) {
  AcousticImage img;
  img.axes = std::move(ds);
  img.power = std::move(power);
  return img;
}

ObservationMatrix passive_snapshot(const WaveformSet& w, const PipelineParams& params) {
  // Passive base signal is a dirac, for which the matched filter is the
  // identity; the STFT cell is taken straight from the PCM data.
  const std::size_t frame = params.frame.value_or(
      spectral::strongest_frame(w, params.window_length, params.hop, params.f_target));
  return spectral::snapshot_at(w, params.window_length, params.hop, params.f_target, frame);
}

}  // namespace

std::size_t AcousticImage::pixel_count() const {
  if (direction_indexed()) return directions().size();
  return polar().ranges_m.size() * polar().azimuths_deg.size();
}

void validate(const AcousticImage& img) {
  require(img.power.size() == img.pixel_count(), "image pixel count does not match its axes");
  require(!img.power.empty(), "image is empty");
  for (double v : img.power) require(std::isfinite(v), "image holds a non-finite pixel");
  if (img.scale == Scale::db) {
    require(*std::max_element(img.power.begin(), img.power.end()) == 0.0,
            "dB image must peak at 0 dB");
  } else {
    for (double v : img.power) require(v >= 0.0, "linear image holds a negative pixel");
  }
}

AcousticImage to_db(const AcousticImage& img, double floor_db) {
  require(img.scale == Scale::linear, "image is already in dB");
  require(floor_db < 0.0, "dB floor must be negative");
  const double peak = img.power.empty() ? 0.0 : *std::max_element(img.power.begin(), img.power.end());
  require(peak > 0.0, "cannot convert an all-zero image to dB");
  AcousticImage out = img;
  out.scale = Scale::db;
  out.floor_db = floor_db;
  for (double& v : out.power) {
    const double db = v > 0.0 ? 10.0 * std::log10(v / peak) : floor_db;
    v = std::max(db, floor_db);
  }
  return out;
}

double linear_power(const AcousticImage& img, std::size_t i) {
  return img.scale == Scale::db ? std::pow(10.0, img.power[i] / 10.0) : img.power[i];
}

std::size_t peak_index(const AcousticImage& img) {
  require(!img.power.empty(), "image is empty");
  return static_cast<std::size_t>(
      std::distance(img.power.begin(), std::max_element(img.power.begin(), img.power.end())));
}

double pslr(const AcousticImage& img, double exclusion_deg) {
  require(img.direction_indexed(), "PSLR needs a direction-indexed image");
  require(exclusion_deg >= 0.0, "exclusion radius must be >= 0");
  const auto& ds = img.directions();
  const std::size_t peak = peak_index(img);
  const Eigen::Vector3d up = geometry::unit_vector(ds.directions[peak]);
  double sidelobe = -1.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Eigen::Vector3d u = geometry::unit_vector(ds.directions[i]);
    const double dist = std::atan2(u.cross(up).norm(), u.dot(up)) * kRadToDeg;
    if (dist > exclusion_deg) sidelobe = std::max(sidelobe, linear_power(img, i));
  }
  require(sidelobe >= 0.0, "mainlobe exclusion covers the whole direction set");
  return 10.0 * std::log10(linear_power(img, peak) / sidelobe);
}

ObservationMatrix narrowband_snapshot(const ArrayGeometry& g, const Medium& m, double frequency,
                                      std::span<const Direction> sources, double snr_db,
                                      std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x70736600u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  ObservationMatrix obs;
  obs.frequency = frequency;
  obs.x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.size()));
  for (const auto& d : sources)
    obs.x += geometry::steering_vector(g, m, frequency, d) * std::polar(1.0, phase(rng));
  if (std::isfinite(snr_db)) {
    const double sigma = std::sqrt(0.5 * std::pow(10.0, -snr_db / 10.0));
    std::normal_distribution<double> normal(0.0, sigma);
    for (Eigen::Index i = 0; i < obs.x.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      obs.x(i) += std::complex<double>(re, im);
    }
  }
  return obs;
}

PsfReport simulate_psf(const ArrayGeometry& g, const Medium& m, const DirectionSet& ds,
                       const PsfParams& params) {
  geometry::validate(params.source);
  require(!ds.directions.empty(), "PSF direction set is empty");
  const Direction sources[] = {params.source};
  const ObservationMatrix obs =
      narrowband_snapshot(g, m, params.frequency, sources, params.snr_db, params.seed);

  PsfReport report;
  report.image = direction_image(
      ds, beamform::spatial_spectrum(obs, g, m, params.filter, ds.directions));
  report.true_direction = params.source;
  report.peak_direction = ds.directions[peak_index(report.image)];
  report.peak_error_deg = geometry::angular_distance_deg(report.peak_direction, params.source);
  report.mainlobe_exclusion_deg = params.exclusion_deg;
  report.pslr_db = pslr(report.image, params.exclusion_deg);
  report.frequency = params.frequency;
  report.above_alias_limit = params.frequency > geometry::max_unaliased_frequency(g, m);
  return report;
}

AcousticImage image_2d(const ObservationMatrix& obs, const ArrayGeometry& g, const Medium& m,
                       const beamform::SpatialFilterParams& filter, const ScanParams& scan) {
  DirectionSet ds = sampling::azimuth_scan(scan.start_deg, scan.end_deg, scan.step_deg, 0.0);
  auto power = beamform::spatial_spectrum(obs, g, m, filter, ds.directions);
  return direction_image(std::move(ds), std::move(power));
}

AcousticImage image_2d(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                       const PipelineParams& params, const ScanParams& scan) {
  require(w.channels == g.size(), "channel count does not match the array");
  return image_2d(passive_snapshot(w, params), g, m, params.filter, scan);
}

AcousticImage image_3d(const ObservationMatrix& obs, const ArrayGeometry& g, const Medium& m,
                       const beamform::SpatialFilterParams& filter, std::size_t n_directions) {
  DirectionSet ds = sampling::eq_sphere_partition(n_directions, true);
  auto power = beamform::spatial_spectrum(obs, g, m, filter, ds.directions);
  return direction_image(std::move(ds), std::move(power));
}

AcousticImage image_3d(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                       const PipelineParams& params, std::size_t n_directions) {
  require(w.channels == g.size(), "channel count does not match the array");
  return image_3d(passive_snapshot(w, params), g, m, params.filter, n_directions);
}

BmodeImage bmode(const WaveformSet& w, std::span<const double> base, const ArrayGeometry& g,
                 const Medium& m, const BmodeParams& params, const DirectionSet& ds) {
  require(w.channels == g.size(), "channel count does not match the array");
  require(!ds.directions.empty(), "B-mode direction set is empty");
  require(params.range_min_m >= 0.0 && params.range_max_m > params.range_min_m,
          "B-mode range window is empty");
  const auto& pp = params.pipeline;
  const WaveformSet compressed = spectral::matched_filter(w, base);
  const std::size_t frames = spectral::frame_count(compressed.length, pp.window_length, pp.hop);
  require(frames > 0, "capture shorter than one STFT window");

  std::vector<std::size_t> selected;
  PolarAxes axes;
  for (std::size_t f = 0; f < frames; ++f) {
    const double r = 0.5 * m.speed_of_sound *
                     spectral::frame_time(f, pp.window_length, pp.hop, w.sample_rate);
    if (r < params.range_min_m || r > params.range_max_m) continue;
    selected.push_back(f);
    axes.ranges_m.push_back(r);
  }
  require(!selected.empty(), "no STFT frame falls inside the B-mode range window");
  for (const auto& d : ds.directions) axes.azimuths_deg.push_back(d.azimuth_deg);

  const std::size_t n_az = ds.size();
  std::vector<double> power(selected.size() * n_az);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto obs = spectral::snapshot_at(compressed, pp.window_length, pp.hop, pp.f_target,
                                           selected[i]);
    const auto row = beamform::spatial_spectrum(obs, g, m, pp.filter, ds.directions);
    std::copy(row.begin(), row.end(), power.begin() + static_cast<std::ptrdiff_t>(i * n_az));
  }

  BmodeImage out;
  out.polar.axes = std::move(axes);
  out.polar.power = std::move(power);
  out.cartesian = to_cartesian(out.polar, params.pixel_pitch_m);
  return out;
}

CartesianRaster to_cartesian(const AcousticImage& polar, double pixel_pitch_m) {
  require(!polar.direction_indexed(), "Cartesian resampling needs a range x azimuth image");
  require(pixel_pitch_m > 0.0, "pixel pitch must be positive");
  const auto& ax = polar.polar();
  require(!ax.ranges_m.empty() && !ax.azimuths_deg.empty(), "polar image is empty");
  const double r_max = ax.ranges_m.back();
  const double r_min = ax.ranges_m.front();
  const double range_step = ax.ranges_m.size() > 1 ? ax.ranges_m[1] - ax.ranges_m[0] : pixel_pitch_m;
  const double az_lo = ax.azimuths_deg.front();
  const double az_hi = ax.azimuths_deg.back();
  const double az_step =
      ax.azimuths_deg.size() > 1 ? ax.azimuths_deg[1] - ax.azimuths_deg[0] : 1.0;

  CartesianRaster raster;
  raster.pixel_pitch_m = pixel_pitch_m;
  raster.x_min_m = -r_max;
  raster.y_min_m = 0.0;
  raster.width = static_cast<std::size_t>(std::ceil(2.0 * r_max / pixel_pitch_m));
  raster.height = static_cast<std::size_t>(std::ceil(r_max / pixel_pitch_m));
  const double background = *std::min_element(polar.power.begin(), polar.power.end());
  raster.values.assign(raster.width * raster.height, background);

  for (std::size_t iy = 0; iy < raster.height; ++iy) {
    for (std::size_t ix = 0; ix < raster.width; ++ix) {
      const double x = raster.x_min_m + (static_cast<double>(ix) + 0.5) * pixel_pitch_m;
      const double y = raster.y_min_m + (static_cast<double>(iy) + 0.5) * pixel_pitch_m;
      const double r = std::hypot(x, y);
      const double az = std::atan2(x, y) * kRadToDeg;
      if (r < r_min - 0.5 * range_step || r > r_max + 0.5 * range_step) continue;
      if (az < az_lo - 0.5 * az_step || az > az_hi + 0.5 * az_step) continue;
      const auto ri = static_cast<std::size_t>(std::clamp(
          std::llround((r - r_min) / range_step), 0LL, static_cast<long long>(ax.ranges_m.size() - 1)));
      const auto ai = static_cast<std::size_t>(std::clamp(
          std::llround((az - az_lo) / az_step), 0LL,
          static_cast<long long>(ax.azimuths_deg.size() - 1)));
      raster.values[iy * raster.width + ix] = polar.power[ri * ax.azimuths_deg.size() + ai];
    }
  }
  return raster;
}

}  // namespace hiris::imaging
