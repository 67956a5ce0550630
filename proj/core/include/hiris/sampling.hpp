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

#ifndef HIRIS_SAMPLING_HPP
#define HIRIS_SAMPLING_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hiris/geometry.hpp"

namespace hiris::sampling {

using geometry::Direction;

enum class SetKind { azimuth_scan, az_el_grid, eq_sphere, custom };

struct DirectionSet {
  std::vector<Direction> directions;
  SetKind kind = SetKind::custom;
  std::map<std::string, double> metadata;  // generation parameters

  // Regular grids record their shape so images can be rasterised:
  // index = row * grid_cols + col.
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;

  std::size_t size() const { return directions.size(); }
};

/// Throws ValidationError when the set is empty, holds an invalid direction
/// or two directions closer than 1e-9 degrees.
void validate(const DirectionSet& ds);

/// Azimuths start, start+step, ..., end (inclusive) at a fixed elevation.
DirectionSet azimuth_scan(double start_deg, double end_deg, double step_deg,
                          double elevation_deg = 0.0);

/// Azimuth x elevation lattice. Rows run over elevation, columns over
/// azimuth. Points that coincide at the poles are kept once (at azimuth 0),
/// so such grids carry no raster shape.
DirectionSet az_el_grid(double az_start_deg, double az_end_deg, double el_start_deg,
                        double el_end_deg, double step_deg);

/// One collar (or polar cap) of the zonal equal-area partition. Colatitudes
/// are measured from +Z (boresight).
struct Zone {
  double colatitude_top = 0.0;     // rad
  double colatitude_bottom = 0.0;  // rad
  std::size_t regions = 0;
};

struct EqPartition {
  std::vector<Zone> zones;                // north cap, collars, south cap
  std::vector<Eigen::Vector3d> centers;   // region centres, zone by zone
};

/// Recursive zonal equal-area partition of S^2 into n regions.
EqPartition eq_partition(std::size_t n);

/// Region centres of eq_partition as directions. With hemisphere_only the
/// sphere is partitioned into 2n regions and only centres with z >= 0 kept,
/// so the result holds approximately n directions.
DirectionSet eq_sphere_partition(std::size_t n, bool hemisphere_only);

/// Index of the member with the smallest great-circle distance to d; ties go
/// to the lowest index.
std::size_t nearest_direction(const DirectionSet& ds, const Direction& d);

/// CSV with header azimuth_deg,elevation_deg,x,y,z.
void write_csv(const DirectionSet& ds, std::ostream& os);

}  // namespace hiris::sampling

#endif  // HIRIS_SAMPLING_HPP
