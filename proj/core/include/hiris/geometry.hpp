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

#ifndef HIRIS_GEOMETRY_HPP
#define HIRIS_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hiris::geometry {

/// Arrival direction. Azimuth rotates about +Y in the XZ-plane, elevation
/// tilts toward +Y; (0, 0) is array boresight (+Z). The front hemisphere is
/// azimuth in [-90, 90]; azimuths out to +/-180 address the rear half-space.
struct Direction {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  friend bool operator==(const Direction&, const Direction&) = default;
};

/// Throws ValidationError unless azimuth is in [-180, 180] and elevation in
/// [-90, 90].
void validate(const Direction& d);

/// (cos el * sin az, sin el, cos el * cos az).
Eigen::Vector3d unit_vector(const Direction& d);

/// Inverse of unit_vector for any nonzero vector.
Direction direction_from_vector(const Eigen::Vector3d& v);

/// Great-circle distance between two directions, in degrees.
double angular_distance_deg(const Direction& a, const Direction& b);

struct Medium {
  double speed_of_sound = 343.0;  // m/s
};

void validate(const Medium& m);

/// Uniform rectangular array in the z = 0 plane, centred on its centroid.
/// Element index is row-major: index = row * cols + col, with columns along
/// +X and rows along +Y.
class ArrayGeometry {
 public:
  ArrayGeometry(std::size_t rows, std::size_t cols, double pitch_m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return rows_ * cols_; }
  double pitch() const { return pitch_; }

  const Eigen::Vector3d& position(std::size_t index) const { return positions_[index]; }
  std::span<const Eigen::Vector3d> positions() const { return positions_; }

  /// Geometry of a contiguous sub_rows x sub_cols block, re-centred.
  ArrayGeometry subarray(std::size_t sub_rows, std::size_t sub_cols) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  double pitch_;
  std::vector<Eigen::Vector3d> positions_;
};

/// Highest frequency the grid samples without spatial aliasing: v / (2 d).
double max_unaliased_frequency(const ArrayGeometry& g, const Medium& m);

/// a_i = exp(+j 2 pi f / v * <p_i, u(d)>). a^H x compensates the arrival
/// delays of a plane wave from d.
Eigen::VectorXcd steering_vector(const ArrayGeometry& g, const Medium& m, double frequency_hz,
                                 const Direction& d);

struct ManifoldMatrix {
  double frequency = 0.0;
  std::vector<Direction> directions;
  Eigen::MatrixXcd matrix;  // elements x directions
};

ManifoldMatrix build_manifold(const ArrayGeometry& g, const Medium& m, double frequency_hz,
                              std::span<const Direction> directions);

/// All contiguous sub_rows x sub_cols blocks, ordered by (row offset, col
/// offset); each block lists full-array element indices in row-major order.
std::vector<std::vector<std::size_t>> enumerate_subarrays(const ArrayGeometry& g,
                                                          std::size_t sub_rows,
                                                          std::size_t sub_cols);

}  // namespace hiris::geometry

#endif  // HIRIS_GEOMETRY_HPP
