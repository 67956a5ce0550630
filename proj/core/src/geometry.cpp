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

#include "hiris/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hiris/error.hpp"

namespace hiris::geometry {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

void validate(const Direction& d) {
  require(std::isfinite(d.azimuth_deg) && d.azimuth_deg >= -180.0 && d.azimuth_deg <= 180.0,
          "azimuth must lie in [-180, 180] degrees, got " + std::to_string(d.azimuth_deg));
  require(std::isfinite(d.elevation_deg) && d.elevation_deg >= -90.0 && d.elevation_deg <= 90.0,
          "elevation must lie in [-90, 90] degrees, got " + std::to_string(d.elevation_deg));
}

Eigen::Vector3d unit_vector(const Direction& d) {
  const double az = d.azimuth_deg * kDegToRad;
  const double el = d.elevation_deg * kDegToRad;
  return {std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az)};
}

Direction direction_from_vector(const Eigen::Vector3d& v) {
  const double n = v.norm();
  require(n > 0.0, "cannot derive a direction from the zero vector");
  const Eigen::Vector3d u = v / n;
  const double el = std::asin(std::clamp(u.y(), -1.0, 1.0));
  // At the poles azimuth is arbitrary; report 0.
  const double horizontal = std::hypot(u.x(), u.z());
  const double az = horizontal < 1e-15 ? 0.0 : std::atan2(u.x(), u.z());
  return {az / kDegToRad, el / kDegToRad};
}

double angular_distance_deg(const Direction& a, const Direction& b) {
  const Eigen::Vector3d ua = unit_vector(a);
  const Eigen::Vector3d ub = unit_vector(b);
  // Contracted multiply-adds can leave a residue in u x u.
  if (ua == ub) return 0.0;
  // atan2 form stays accurate for nearly parallel vectors.
  return std::atan2(ua.cross(ub).norm(), ua.dot(ub)) / kDegToRad;
}

void validate(const Medium& m) {
  require(std::isfinite(m.speed_of_sound) && m.speed_of_sound > 0.0,
          "speed of sound must be positive");
}

ArrayGeometry::ArrayGeometry(std::size_t rows, std::size_t cols, double pitch_m)
    : rows_(rows), cols_(cols), pitch_(pitch_m) {
  require(rows >= 1 && cols >= 1, "array needs at least one row and one column");
  require(std::isfinite(pitch_m) && pitch_m > 0.0, "array pitch must be positive");
  positions_.reserve(rows * cols);
  const double x0 = 0.5 * static_cast<double>(cols - 1);
  const double y0 = 0.5 * static_cast<double>(rows - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      positions_.emplace_back((static_cast<double>(c) - x0) * pitch_m,
                              (static_cast<double>(r) - y0) * pitch_m, 0.0);
    }
  }
}

ArrayGeometry ArrayGeometry::subarray(std::size_t sub_rows, std::size_t sub_cols) const {
  require(sub_rows >= 1 && sub_cols >= 1, "subarray must not be empty");
  require(sub_rows <= rows_ && sub_cols <= cols_, "subarray larger than the array");
  return ArrayGeometry(sub_rows, sub_cols, pitch_);
}

double max_unaliased_frequency(const ArrayGeometry& g, const Medium& m) {
  validate(m);
  return m.speed_of_sound / (2.0 * g.pitch());
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& g, const Medium& m, double frequency_hz,
                                 const Direction& d) {
  validate(m);
  validate(d);
  require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "frequency must be positive");
  const double k = 2.0 * std::numbers::pi * frequency_hz / m.speed_of_sound;
  const Eigen::Vector3d u = unit_vector(d);
  Eigen::VectorXcd a(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    a(static_cast<Eigen::Index>(i)) = std::polar(1.0, k * g.position(i).dot(u));
  }
  return a;
}

ManifoldMatrix build_manifold(const ArrayGeometry& g, const Medium& m, double frequency_hz,
                              std::span<const Direction> directions) {
  require(!directions.empty(), "manifold needs at least one direction");
  ManifoldMatrix out;
  out.frequency = frequency_hz;
  out.directions.assign(directions.begin(), directions.end());
  out.matrix.resize(static_cast<Eigen::Index>(g.size()),
                    static_cast<Eigen::Index>(directions.size()));
  for (std::size_t k = 0; k < directions.size(); ++k) {
    out.matrix.col(static_cast<Eigen::Index>(k)) =
        steering_vector(g, m, frequency_hz, directions[k]);
  }
  return out;
}

std::vector<std::vector<std::size_t>> enumerate_subarrays(const ArrayGeometry& g,
                                                          std::size_t sub_rows,
                                                          std::size_t sub_cols) {
  require(sub_rows >= 1 && sub_cols >= 1, "subarray must not be empty");
  require(sub_rows <= g.rows() && sub_cols <= g.cols(), "subarray larger than the array");
  std::vector<std::vector<std::size_t>> blocks;
  blocks.reserve((g.rows() - sub_rows + 1) * (g.cols() - sub_cols + 1));
  for (std::size_t r0 = 0; r0 + sub_rows <= g.rows(); ++r0) {
    for (std::size_t c0 = 0; c0 + sub_cols <= g.cols(); ++c0) {
      std::vector<std::size_t> idx;
      idx.reserve(sub_rows * sub_cols);
      for (std::size_t r = 0; r < sub_rows; ++r)
        for (std::size_t c = 0; c < sub_cols; ++c) idx.push_back((r0 + r) * g.cols() + c0 + c);
      blocks.push_back(std::move(idx));
    }
  }
  return blocks;
}

}  // namespace hiris::geometry
