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

#include "hiris/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "hiris/error.hpp"

namespace hiris::sampling {
namespace {

constexpr double kPi = std::numbers::pi;

// Area of the spherical cap of colatitude theta on the unit sphere.
double cap_area(double theta) { return 2.0 * kPi * (1.0 - std::cos(theta)); }

// Colatitude of the cap with the given area.
double cap_colatitude(double area) {
  return std::acos(std::clamp(1.0 - area / (2.0 * kPi), -1.0, 1.0));
}

// Inclusive arithmetic range with the count fixed up front, so accumulated
// floating error cannot drop the final point.
std::vector<double> inclusive_range(double start, double end, double step) {
  require(std::isfinite(start) && std::isfinite(end), "scan bounds must be finite");
  require(std::isfinite(step) && step > 0.0, "scan step must be positive");
  require(start <= end, "scan range is empty (start > end)");
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
  return values;
}

}  // namespace

void validate(const DirectionSet& ds) {
  require(!ds.directions.empty(), "direction set is empty");
  std::vector<Eigen::Vector3d> units;
  units.reserve(ds.size());
  for (const auto& d : ds.directions) {
    geometry::validate(d);
    units.push_back(geometry::unit_vector(d));
  }
  // Sort by z so that duplicates are found among near neighbours.
  std::vector<std::size_t> order(units.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return units[a].z() < units[b].z(); });
  constexpr double kTol = 1e-9 * kPi / 180.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (units[order[j]].z() - units[order[i]].z() > kTol) break;
      const double dist = std::atan2(units[order[i]].cross(units[order[j]]).norm(),
                                     units[order[i]].dot(units[order[j]]));
      require(dist > kTol, "direction set contains duplicate directions");
    }
  }
}

DirectionSet azimuth_scan(double start_deg, double end_deg, double step_deg,
                          double elevation_deg) {
  DirectionSet ds;
  ds.kind = SetKind::azimuth_scan;
  for (double az : inclusive_range(start_deg, end_deg, step_deg)) {
    Direction d{az, elevation_deg};
    geometry::validate(d);
    ds.directions.push_back(d);
  }
  ds.metadata = {{"start_deg", start_deg},
                 {"end_deg", end_deg},
                 {"step_deg", step_deg},
                 {"elevation_deg", elevation_deg}};
  ds.grid_rows = 1;
  ds.grid_cols = ds.directions.size();
  return ds;
}

DirectionSet az_el_grid(double az_start_deg, double az_end_deg, double el_start_deg,
                        double el_end_deg, double step_deg) {
  const auto azimuths = inclusive_range(az_start_deg, az_end_deg, step_deg);
  const auto elevations = inclusive_range(el_start_deg, el_end_deg, step_deg);
  DirectionSet ds;
  ds.kind = SetKind::az_el_grid;
  bool collapsed = false;
  for (double el : elevations) {
    const bool pole = std::abs(std::abs(el) - 90.0) < 1e-12;
    if (pole) {
      collapsed = collapsed || azimuths.size() > 1;
      ds.directions.push_back({0.0, el});
      continue;
    }
    for (double az : azimuths) {
      Direction d{az, el};
      geometry::validate(d);
      ds.directions.push_back(d);
    }
  }
  ds.metadata = {{"az_start_deg", az_start_deg}, {"az_end_deg", az_end_deg},
                 {"el_start_deg", el_start_deg}, {"el_end_deg", el_end_deg},
                 {"step_deg", step_deg}};
  if (!collapsed) {
    ds.grid_rows = elevations.size();
    ds.grid_cols = azimuths.size();
  }
  return ds;
}

EqPartition eq_partition(std::size_t n) {
  require(n >= 1, "partition needs at least one region");
  EqPartition part;
  if (n == 1) {
    part.zones.push_back({0.0, kPi, 1});
    part.centers.emplace_back(0.0, 0.0, 1.0);
    return part;
  }

  const double region_area = 4.0 * kPi / static_cast<double>(n);
  const double polar = cap_colatitude(region_area);  // arccos(1 - 2/n)

  // Collar region counts: ideal counts rounded with a running remainder so
  // that the total is exactly n - 2.
  std::vector<std::size_t> counts;
  if (n > 2) {
    const double ideal_angle = std::sqrt(region_area);
    const auto collars = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround((kPi - 2.0 * polar) / ideal_angle)));
    const double fitting_angle = (kPi - 2.0 * polar) / static_cast<double>(collars);
    double remainder = 0.0;
    for (std::size_t i = 0; i < collars; ++i) {
      const double top = polar + static_cast<double>(i) * fitting_angle;
      const double ideal = (cap_area(top + fitting_angle) - cap_area(top)) / region_area;
      const double rounded = std::round(ideal + remainder);
      remainder += ideal - rounded;
      counts.push_back(static_cast<std::size_t>(std::max(0.0, rounded)));
    }
    // Guard against a rounding slip in the last collar.
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    counts.back() = counts.back() + (n - 2) - total;
  }

  // Zone boundaries are placed where the enclosed cap holds an integral
  // number of regions, which makes every region area exactly 4 pi / n.
  part.zones.push_back({0.0, polar, 1});
  std::size_t enclosed = 1;
  double top = polar;
  for (std::size_t count : counts) {
    enclosed += count;
    const double bottom = enclosed == n - 1 ? kPi - polar
                                            : cap_colatitude(static_cast<double>(enclosed) *
                                                             region_area);
    part.zones.push_back({top, bottom, count});
    top = bottom;
  }
  part.zones.push_back({kPi - polar, kPi, 1});

  part.centers.emplace_back(0.0, 0.0, 1.0);
  for (std::size_t z = 1; z + 1 < part.zones.size(); ++z) {
    const Zone& zone = part.zones[z];
    if (zone.regions == 0) continue;
    const double colat = 0.5 * (zone.colatitude_top + zone.colatitude_bottom);
    const double step = 2.0 * kPi / static_cast<double>(zone.regions);
    // Consecutive collars are staggered by half a region.
    const double offset = (z % 2 == 0) ? 0.5 : 0.0;
    for (std::size_t k = 0; k < zone.regions; ++k) {
      const double lon = (static_cast<double>(k) + 0.5 + offset) * step;
      part.centers.emplace_back(std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon),
                                std::cos(colat));
    }
  }
  part.centers.emplace_back(0.0, 0.0, -1.0);
  return part;
}

DirectionSet eq_sphere_partition(std::size_t n, bool hemisphere_only) {
  require(n >= 1, "partition needs at least one region");
  const EqPartition part = eq_partition(hemisphere_only ? 2 * n : n);
  DirectionSet ds;
  ds.kind = SetKind::eq_sphere;
  for (const auto& c : part.centers) {
    if (hemisphere_only && c.z() < -1e-12) continue;
    ds.directions.push_back(geometry::direction_from_vector(c));
  }
  ds.metadata = {{"n", static_cast<double>(n)}, {"hemisphere_only", hemisphere_only ? 1.0 : 0.0}};
  return ds;
}

std::size_t nearest_direction(const DirectionSet& ds, const Direction& d) {
  require(!ds.directions.empty(), "direction set is empty");
  const Eigen::Vector3d target = geometry::unit_vector(d);
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Eigen::Vector3d u = geometry::unit_vector(ds.directions[i]);
    const double dist = std::atan2(u.cross(target).norm(), u.dot(target));
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

void write_csv(const DirectionSet& ds, std::ostream& os) {
  os << "azimuth_deg,elevation_deg,x,y,z\n";
  os << std::setprecision(17);
  for (const auto& d : ds.directions) {
    const Eigen::Vector3d u = geometry::unit_vector(d);
    os << d.azimuth_deg << ',' << d.elevation_deg << ',' << u.x() << ',' << u.y() << ','
       << u.z() << '\n';
  }
}

}  // namespace hiris::sampling
