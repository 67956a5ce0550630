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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hiris/error.hpp"
#include "hiris/sampling.hpp"
#include "oracles.hpp"

namespace {

using namespace hiris;
using namespace hiris::sampling;

// Area of every region from the zone boundaries, by quadrature.
void expect_equal_area(std::size_t n) {
  const auto part = eq_partition(n);
  std::size_t regions = 0;
  const double target = 4 * oracle::kPi / static_cast<double>(n);
  for (const auto& z : part.zones) {
    if (z.regions == 0) continue;
    regions += z.regions;
    const double area = oracle::zone_area(z.colatitude_top, z.colatitude_bottom) /
                        static_cast<double>(z.regions);
    EXPECT_NEAR(area / target, 1.0, 1e-9) << "n=" << n;
  }
  EXPECT_EQ(regions, n);
  EXPECT_EQ(part.centers.size(), n);
  EXPECT_NEAR(part.zones.front().colatitude_top, 0.0, 0.0);
  EXPECT_NEAR(part.zones.back().colatitude_bottom, oracle::kPi, 1e-15);
  for (std::size_t i = 1; i < part.zones.size(); ++i)
    EXPECT_EQ(part.zones[i].colatitude_top, part.zones[i - 1].colatitude_bottom);
}

TEST(AzimuthScan, Counts) {
  EXPECT_EQ(azimuth_scan(-90, 90, 1).size(), 181u);
  const auto one = azimuth_scan(0, 0, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.directions[0], (Direction{0, 0}));
  const auto five = azimuth_scan(-10, 10, 5);
  ASSERT_EQ(five.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(five.directions[i].azimuth_deg, -10 + 5 * i);
  EXPECT_EQ(azimuth_scan(-90, 90, 0.1).size(), 1801u);
  EXPECT_THROW(azimuth_scan(10, -10, 1), ValidationError);
  EXPECT_THROW(azimuth_scan(0, 10, 0), ValidationError);
  EXPECT_NO_THROW(validate(azimuth_scan(-90, 90, 1)));
}

TEST(AzElGrid, PolesCollapse) {
  const auto g = az_el_grid(-90, 90, -90, 90, 1);
  EXPECT_EQ(g.size(), 179u * 181u + 2u);
  EXPECT_NO_THROW(validate(g));
  const auto flat = az_el_grid(-10, 10, -5, 5, 5);
  EXPECT_EQ(flat.grid_rows, 3u);
  EXPECT_EQ(flat.grid_cols, 5u);
}

TEST(EqPartition, SmallCases) {
  const auto one = eq_sphere_partition(1, false);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.directions[0].elevation_deg, 0.0);
  EXPECT_EQ(one.directions[0].azimuth_deg, 0.0);
  const auto part2 = eq_partition(2);
  ASSERT_EQ(part2.zones.size(), 2u);
  EXPECT_NEAR(part2.zones[0].colatitude_bottom, oracle::kPi / 2, 1e-15);
  EXPECT_NEAR(part2.centers[0].z(), 1.0, 0);
  EXPECT_NEAR(part2.centers[1].z(), -1.0, 0);
}

TEST(EqPartition, HundredRegionCollarTotals) {
  const auto part = eq_partition(100);
  std::size_t collars = 0;
  for (std::size_t i = 1; i + 1 < part.zones.size(); ++i) collars += part.zones[i].regions;
  EXPECT_EQ(collars, 98u);
  EXPECT_NEAR(part.zones[0].colatitude_bottom, std::acos(1 - 2.0 / 100), 1e-15);
}

TEST(EqPartition, EqualAreaAcceptanceSizes) {
  for (std::size_t n : {1, 2, 3, 4, 5, 10, 33, 100, 1000, 4096}) expect_equal_area(n);
}

TEST(EqPartition, ExactCountUpTo10k) {
  for (std::size_t n = 1; n <= 10000; n += (n < 200 ? 1 : 97)) {
    const auto part = eq_partition(n);
    std::size_t regions = 0;
    for (const auto& z : part.zones) regions += z.regions;
    ASSERT_EQ(regions, n);
    ASSERT_EQ(part.centers.size(), n);
  }
}

TEST(EqPartition, CoveringRadius) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  for (std::size_t n : {9, 50, 400}) {
    const auto part = eq_partition(n);
    double worst = 0;
    for (int s = 0; s < 20000; ++s) {
      Eigen::Vector3d p(g(rng), g(rng), g(rng));
      p.normalize();
      double best = 10;
      for (const auto& c : part.centers) best = std::min(best, std::acos(std::clamp(p.dot(c), -1.0, 1.0)));
      worst = std::max(worst, best);
    }
    EXPECT_LE(worst, 4.0 / std::sqrt(double(n))) << n;
  }
}

TEST(EqPartition, HemisphereKeepsFront) {
  const auto h = eq_sphere_partition(1000, true);
  EXPECT_NEAR(static_cast<double>(h.size()), 1000.0, 40.0);
  for (const auto& d : h.directions) EXPECT_GE(geometry::unit_vector(d).z(), -1e-12);
  EXPECT_NO_THROW(validate(h));
  EXPECT_NO_THROW(validate(eq_sphere_partition(1000, false)));
}

TEST(Nearest, Examples) {
  const auto s = azimuth_scan(-90, 90, 1);
  EXPECT_EQ(nearest_direction(s, {37, 0}), 127u);
  EXPECT_EQ(s.directions[nearest_direction(s, {0, 0})].azimuth_deg, 0.0);
  EXPECT_EQ(s.directions[nearest_direction(s, {0.4, 0})].azimuth_deg, 0.0);
  // Tie between 0 and 1 goes to the lower index.
  EXPECT_EQ(s.directions[nearest_direction(s, {0.5, 0})].azimuth_deg, 0.0);
}

TEST(DirectionSetValidation, RejectsDuplicatesAndEmpty) {
  DirectionSet ds;
  EXPECT_THROW(validate(ds), ValidationError);
  ds.directions = {{10, 0}, {10, 0}};
  EXPECT_THROW(validate(ds), ValidationError);
  ds.directions = {{0, 90}, {45, 90}};
  EXPECT_THROW(validate(ds), ValidationError);
}

TEST(DirectionSetCsv, HeaderAndRows) {
  std::ostringstream os;
  write_csv(eq_sphere_partition(100, false), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "azimuth_deg,elevation_deg,x,y,z");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 100);
}

}  // namespace
