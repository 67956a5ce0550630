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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hiris/error.hpp"
#include "hiris/imaging.hpp"
#include "hiris/synth.hpp"
#include "oracles.hpp"

namespace {

using namespace hiris;
using namespace hiris::imaging;
using beamform::Kind;
using beamform::SpatialFilterParams;

const Medium kAir{343.0};
const ArrayGeometry kFull(32, 32, 3.9e-3);

AcousticImage scan_image(std::vector<double> power) {
  AcousticImage img;
  img.axes = sampling::azimuth_scan(-90, 90, 180.0 / static_cast<double>(power.size() - 1), 0);
  img.power = std::move(power);
  return img;
}

SpatialFilterParams bartlett() {
  SpatialFilterParams p;
  p.kind = Kind::bartlett;
  return p;
}

SpatialFilterParams small_mvdr() {
  SpatialFilterParams p;
  p.smoothing.sub_rows = 14;
  p.smoothing.sub_cols = 14;
  return p;
}

double width_above(const AcousticImage& db, double level) {
  const auto& ds = db.directions();
  const std::size_t peak = peak_index(db);
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && db.power[lo - 1] >= level) --lo;
  while (hi + 1 < db.power.size() && db.power[hi + 1] >= level) ++hi;
  return ds.directions[hi].azimuth_deg - ds.directions[lo].azimuth_deg;
}

TEST(ToDb, Examples) {
  const auto img = scan_image({10.0, 1.0, 1e-9, 5.0});
  const auto db = to_db(img, -60);
  EXPECT_EQ(db.scale, Scale::db);
  EXPECT_DOUBLE_EQ(db.power[0], 0.0);
  EXPECT_NEAR(db.power[1], -10.0, 1e-12);
  EXPECT_DOUBLE_EQ(db.power[2], -60.0);
  EXPECT_NO_THROW(validate(db));
  EXPECT_THROW(to_db(db, -60), ValidationError);
  EXPECT_THROW(to_db(img, 0.0), ValidationError);
  EXPECT_THROW(to_db(scan_image({0.0, 0.0}), -60), ValidationError);
}

TEST(ToDb, RoundTripAboveFloor) {
  std::vector<double> p(181);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1.0 + std::sin(0.1 * static_cast<double>(i)) + 1e-3;
  const auto img = scan_image(p);
  const auto db = to_db(img, -200);
  const double peak = *std::max_element(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(linear_power(db, i) * peak, p[i], 1e-12 * p[i]);
    EXPECT_NEAR(linear_power(img, i), p[i], 0.0);
  }
}

TEST(Validate, RejectsBadImages) {
  auto img = scan_image({1.0, 2.0, 3.0});
  EXPECT_NO_THROW(validate(img));
  img.power[1] = std::nan("");
  EXPECT_THROW(validate(img), ValidationError);
  img.power = {1.0, 2.0};
  EXPECT_THROW(validate(img), ValidationError);
  img.power = {1.0, -2.0, 3.0};
  EXPECT_THROW(validate(img), ValidationError);
}

TEST(Pslr, Examples) {
  EXPECT_NEAR(pslr(scan_image(std::vector<double>(181, 2.0)), 5.0), 0.0, 1e-12);
  std::vector<double> spike(181, 1e-6);
  spike[90] = 1.0;
  EXPECT_NEAR(pslr(scan_image(spike), 5.0), 60.0, 1e-9);
  EXPECT_THROW(pslr(scan_image(spike), 360.0), ValidationError);
  AcousticImage polar;
  polar.axes = PolarAxes{{1.0}, {0.0}};
  polar.power = {1.0};
  EXPECT_THROW(pslr(polar, 5.0), ValidationError);
}

TEST(NarrowbandSnapshot, NoiseFreeEqualsSteering) {
  const Direction d{12, -7};
  const Direction src[] = {d};
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, src, synth::kInfinite, 3);
  const auto a = geometry::steering_vector(kFull, kAir, 42e3, d);
  const auto s = obs.x(0) / a(0);
  EXPECT_NEAR(std::abs(s), 1.0, 1e-12);
  EXPECT_LT((obs.x - a * s).norm(), 1e-9);
}

TEST(NarrowbandSnapshot, NoisePowerMatchesSnr) {
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, {}, 5.0, 11);
  const double per_element = obs.x.squaredNorm() / static_cast<double>(obs.x.size());
  EXPECT_NEAR(10 * std::log10(per_element), -5.0, 0.5);
  const auto again = narrowband_snapshot(kFull, kAir, 42e3, {}, 5.0, 11);
  EXPECT_EQ(obs.x, again.x);
}

TEST(Psf, BoresightMvdrPeak) {
  PsfParams p;
  p.source = {0, 0};
  const auto ds = sampling::az_el_grid(-90, 90, -90, 90, 1);
  const auto r = simulate_psf(kFull, kAir, ds, p);
  EXPECT_EQ(r.peak_error_deg, 0.0);
  EXPECT_GT(r.pslr_db, 15.0);
  EXPECT_FALSE(r.above_alias_limit);
}

TEST(Psf, BartlettOffAxisPeak) {
  PsfParams p;
  p.source = {-45, 45};
  p.filter = bartlett();
  const auto ds = sampling::az_el_grid(-90, 90, -90, 90, 1);
  const auto r = simulate_psf(kFull, kAir, ds, p);
  EXPECT_NEAR(r.peak_direction.azimuth_deg, -45.0, 1e-9);
  EXPECT_NEAR(r.peak_direction.elevation_deg, 45.0, 1e-9);
}

TEST(Psf, AliasFlag) {
  PsfParams p;
  p.source = {0, 0};
  p.filter = bartlett();
  p.frequency = 50e3;
  const auto r = simulate_psf(kFull, kAir, sampling::azimuth_scan(-90, 90, 1, 0), p);
  EXPECT_TRUE(r.above_alias_limit);
}

TEST(Psf, BartlettAzimuthCutMatchesArrayFactor) {
  PsfParams p;
  p.source = {0, 0};
  p.filter = bartlett();
  p.filter.smoothing.sub_rows = 32;
  p.filter.smoothing.sub_cols = 32;
  p.snr_db = synth::kInfinite;
  const auto ds = sampling::azimuth_scan(-90, 90, 0.05, 0);
  const auto r = simulate_psf(kFull, kAir, ds, p);
  double oracle_peak = 0, oracle_side = 0;
  for (const auto& d : ds.directions) {
    const double v = oracle::array_factor_power(32, 32, 3.9e-3, 343, 42e3, 0, 0, d.azimuth_deg, 0);
    if (std::abs(d.azimuth_deg) <= 5.0) oracle_peak = std::max(oracle_peak, v);
    else oracle_side = std::max(oracle_side, v);
  }
  EXPECT_NEAR(r.pslr_db, 10 * std::log10(oracle_peak / oracle_side), 1e-6);
  EXPECT_NEAR(r.pslr_db, 13.3, 0.2);
}

TEST(Psf, NoiselessPeakOnGridIsExact) {
  const auto ds = sampling::az_el_grid(-90, 90, -60, 60, 3);
  SpatialFilterParams mvdr;
  mvdr.smoothing.sub_rows = 14;
  mvdr.smoothing.sub_cols = 14;
  const ArrayGeometry g(16, 16, 3.9e-3);
  SpatialFilterParams plain = bartlett();
  plain.smoothing = mvdr.smoothing;
  for (const auto& filter : {mvdr, plain}) {
    for (const Direction d : {Direction{0, 0}, Direction{-30, 15}, Direction{51, -42}}) {
      PsfParams p;
      p.source = d;
      p.filter = filter;
      p.snr_db = synth::kInfinite;
      EXPECT_EQ(simulate_psf(g, kAir, ds, p).peak_error_deg, 0.0);
    }
  }
}

TEST(Psf, PslrImprovesWithSnr) {
  const auto ds = sampling::azimuth_scan(-90, 90, 0.5, 0);
  auto mean_pslr = [&](double snr) {
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      PsfParams p;
      p.source = {0, 0};
      p.snr_db = snr;
      p.seed = seed;
      sum += simulate_psf(kFull, kAir, ds, p).pslr_db;
    }
    return sum / 10;
  };
  EXPECT_GE(mean_pslr(20.0), mean_pslr(5.0));
}

TEST(Image2d, SnapshotSourceAt30) {
  const Direction src[] = {{30, 0}};
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, src, 5.0, 1);
  const auto img = image_2d(obs, kFull, kAir, SpatialFilterParams{}, {20, 40, 0.1});
  const auto& ds = img.directions();
  EXPECT_NEAR(ds.directions[peak_index(img)].azimuth_deg, 30.0, 0.1 + 1e-9);
  EXPECT_LE(width_above(to_db(img, -100), -3.0), 4.0);
}

TEST(Image2d, PassivePipeline) {
  const std::vector<synth::SourceSpec> src{
      {{30, 0}, synth::kInfinite, {synth::WaveformKind::tone, 42e3, 42e3, 10e-3}, 1}};
  const auto w = synth::synthesize_array_signals(kFull, kAir, src, 450e3, 4e-3, {5.0, 2});
  PipelineParams pp;
  const auto img = image_2d(w, kFull, kAir, pp);
  EXPECT_EQ(img.directions().directions[peak_index(img)].azimuth_deg, 30.0);

  const std::vector<synth::SourceSpec> ahead{
      {{0, 0}, synth::kInfinite, {synth::WaveformKind::tone, 42e3, 42e3, 10e-3}, 1}};
  const auto w0 = synth::synthesize_array_signals(kFull, kAir, ahead, 450e3, 4e-3, {});
  const auto img0 = image_2d(w0, kFull, kAir, pp);
  EXPECT_EQ(img0.directions().directions[peak_index(img0)].azimuth_deg, 0.0);
}

TEST(Image2d, TwoSources) {
  const Direction src[] = {{0, 0}, {30, 0}};
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, src, 5.0, 4);
  const auto img = image_2d(obs, kFull, kAir, SpatialFilterParams{});
  const auto& ds = img.directions();
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < img.power.size(); ++i)
    if (img.power[i] > img.power[i - 1] && img.power[i] > img.power[i + 1] &&
        img.power[i] > 0.1 * img.power[peak_index(img)])
      maxima.push_back(ds.directions[i].azimuth_deg);
  ASSERT_EQ(maxima.size(), 2u);
  EXPECT_LE(std::abs(maxima[0] - 0.0), 1.0);
  EXPECT_LE(std::abs(maxima[1] - 30.0), 1.0);
}

TEST(Image3d, Boresight) {
  const Direction src[] = {{0, 0}};
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, src, 5.0, 5);
  const auto img = image_3d(obs, kFull, kAir, SpatialFilterParams{}, 1000);
  const auto& ds = img.directions();
  EXPECT_EQ(peak_index(img), sampling::nearest_direction(ds, {0, 0}));
  for (const auto& d : ds.directions) EXPECT_GE(geometry::unit_vector(d).z(), -1e-12);
}

SpatialFilterParams capon() {
  SpatialFilterParams p;
  p.estimator = beamform::PowerEstimator::capon;
  return p;
}

// The averaged-output MVDR mainlobe is narrower than a 1000-cell spacing, so
// off-grid sources are checked with the Capon estimator and Bartlett.
TEST(Image3d, OffAxisWithinCellSpacing) {
  const Direction src[] = {{-45, 45}};
  const std::size_t n = 1000;
  const double spacing_deg = oracle::deg(std::sqrt(2 * oracle::kPi / static_cast<double>(n)));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto obs = narrowband_snapshot(kFull, kAir, 42e3, src, 5.0, seed);
    for (const auto& filter : {capon(), bartlett()}) {
      const auto img = image_3d(obs, kFull, kAir, filter, n);
      const auto peak = img.directions().directions[peak_index(img)];
      EXPECT_LE(geometry::angular_distance_deg(peak, {-45, 45}), spacing_deg) << seed;
    }
  }
}

TEST(Image3d, HemisphereCountNearRequest) {
  const auto obs = narrowband_snapshot(kFull, kAir, 42e3, {}, 0.0, 1);
  const auto img = image_3d(obs, kFull, kAir, bartlett(), 1000);
  EXPECT_NEAR(static_cast<double>(img.pixel_count()), 1000.0, 50.0);
}

TEST(Image3d, NoiseOnlyHasLowDynamicRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto obs = narrowband_snapshot(kFull, kAir, 42e3, {}, 0.0, seed);
    const auto img = image_3d(obs, kFull, kAir, capon(), 500);
    const auto [lo, hi] = std::minmax_element(img.power.begin(), img.power.end());
    EXPECT_LT(10 * std::log10(*hi / *lo), 10.0) << "seed " << seed;
  }
}

class BmodeTest : public ::testing::Test {
 protected:
  const ArrayGeometry g{16, 16, 3.9e-3};
  const synth::WaveformDescriptor chirp{synth::WaveformKind::hyperbolic_chirp, 30e3, 50e3, 1e-3};
  const double fs = 450e3;
  const double tolerance = 343.0 * 64 / (2 * fs) + 343.0 * 256 / (4 * fs);

  BmodeImage run(std::span<const synth::Reflector> refl) const {
    const auto w = synth::echo_scene(g, kAir, refl, chirp, fs, 12e-3, {20.0, 9});
    BmodeParams p;
    p.pipeline.filter = small_mvdr();
    p.range_min_m = 0.5;
    p.range_max_m = 2.0;
    return bmode(w, synth::generate_waveform(chirp, fs), g, kAir, p,
                 sampling::azimuth_scan(-90, 90, 1, 0));
  }
};

TEST_F(BmodeTest, SingleReflectorRange) {
  const std::vector<synth::Reflector> refl{{{0, 0}, 1.0, 1.0}};
  const auto img = run(refl);
  const auto& ax = img.polar.polar();
  ASSERT_EQ(img.polar.power.size(), ax.ranges_m.size() * ax.azimuths_deg.size());
  const std::size_t peak = peak_index(img.polar);
  EXPECT_EQ(ax.azimuths_deg[peak % ax.azimuths_deg.size()], 0.0);
  EXPECT_LE(std::abs(ax.ranges_m[peak / ax.azimuths_deg.size()] - 1.0), tolerance);
  EXPECT_GT(img.cartesian.width, 0u);
  EXPECT_EQ(img.cartesian.values.size(), img.cartesian.width * img.cartesian.height);
}

TEST_F(BmodeTest, TwoReflectors) {
  const std::vector<synth::Reflector> refl{{{0, 0}, 1.0, 1.0}, {{30, 0}, 1.5, 1.0}};
  const auto img = run(refl);
  const auto& ax = img.polar.polar();
  const std::size_t n_az = ax.azimuths_deg.size();
  auto best_in = [&](double az_lo, double az_hi) {
    std::size_t best = 0;
    double value = -1;
    for (std::size_t i = 0; i < img.polar.power.size(); ++i) {
      const double az = ax.azimuths_deg[i % n_az];
      if (az < az_lo || az > az_hi) continue;
      if (img.polar.power[i] > value) {
        value = img.polar.power[i];
        best = i;
      }
    }
    return best;
  };
  const std::size_t near = best_in(-90, 15), far = best_in(15, 90);
  EXPECT_NEAR(ax.azimuths_deg[near % n_az], 0.0, 1.0);
  EXPECT_LE(std::abs(ax.ranges_m[near / n_az] - 1.0), tolerance);
  EXPECT_NEAR(ax.azimuths_deg[far % n_az], 30.0, 1.0);
  EXPECT_LE(std::abs(ax.ranges_m[far / n_az] - 1.5), tolerance);
}

TEST_F(BmodeTest, ZeroReflectivityHasNoPeak) {
  const std::vector<synth::Reflector> on{{{0, 0}, 1.0, 1.0}};
  const std::vector<synth::Reflector> off{{{0, 0}, 1.0, 0.0}};
  const auto a = run(on), b = run(off);
  const double peak_on = a.polar.power[peak_index(a.polar)];
  const double peak_off = b.polar.power[peak_index(b.polar)];
  EXPECT_LT(10 * std::log10(peak_off / peak_on), -20.0);
}

TEST(Cartesian, GeometryAndSectorFill) {
  AcousticImage polar;
  polar.axes = PolarAxes{{0.5, 1.0}, {-30, 0, 30}};
  polar.power = {1, 2, 3, 4, 5, 6};
  const auto c = to_cartesian(polar, 0.1);
  EXPECT_EQ(c.width, 20u);
  EXPECT_EQ(c.height, 10u);
  EXPECT_DOUBLE_EQ(c.x_min_m, -1.0);
  EXPECT_DOUBLE_EQ(c.y_min_m, 0.0);
  // Corner pixels lie outside the +/-30 degree sector.
  EXPECT_EQ(c.values[0], 1.0);
  EXPECT_EQ(c.values[c.width - 1], 1.0);
  // Straight ahead at about 1 m.
  EXPECT_EQ(c.values[9 * c.width + 10], 5.0);
  EXPECT_THROW(to_cartesian(polar, 0.0), ValidationError);
}

}  // namespace
