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

#include "hiris/error.hpp"
#include "hiris/spectral.hpp"
#include "hiris/synth.hpp"
#include "oracles.hpp"

namespace {

using namespace hiris;
using namespace hiris::spectral;
using geometry::ArrayGeometry;
using geometry::Direction;

const geometry::Medium kAir{343.0};

WaveformSet single(std::vector<double> x, double fs = 450e3) {
  WaveformSet w(fs, 1, x.size());
  w.samples = std::move(x);
  return w;
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

TEST(MatchedFilter, DiracIsIdentity) {
  const auto w = single(random_signal(500, 1));
  const auto out = matched_filter(w, std::vector<double>{1.0, 0.0, 0.0});
  EXPECT_EQ(out.samples, w.samples);
}

TEST(MatchedFilter, PeakAtDelay) {
  const auto base = random_signal(64, 2);
  std::vector<double> x(800, 0.0);
  for (std::size_t m = 0; m < base.size(); ++m) x[100 + m] = base[m];
  const auto out = matched_filter(single(x), base);
  const auto ref = oracle::direct_xcorr(x, base);
  std::size_t peak = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (std::abs(out.samples[n]) > std::abs(out.samples[peak])) peak = n;
    EXPECT_NEAR(out.samples[n], ref[n], 1e-9 * std::abs(ref[100]));
  }
  EXPECT_EQ(peak, 100u);
}

TEST(MatchedFilter, NegatedBase) {
  const auto base = random_signal(50, 3);
  std::vector<double> x(300, 0.0);
  double energy = 0;
  for (std::size_t m = 0; m < base.size(); ++m) {
    x[m] = -base[m];
    energy += base[m] * base[m];
  }
  const auto out = matched_filter(single(x), base);
  EXPECT_NEAR(out.samples[0], -energy, 1e-9 * energy);
}

TEST(MatchedFilter, EqualsDirectCorrelation) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto x = random_signal(997, seed);
    const auto b = random_signal(37 + seed, seed + 100);
    const auto out = matched_filter(single(x), b);
    const auto ref = oracle::direct_xcorr(x, b);
    double scale = 0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(out.samples[n], ref[n], 1e-9 * scale);
  }
}

TEST(MatchedFilter, RejectsEmptyBase) {
  const auto w = single(random_signal(10, 1));
  EXPECT_THROW(matched_filter(w, std::vector<double>{}), ValidationError);
  EXPECT_THROW(matched_filter(w, std::vector<double>{0.0, 0.0}), ValidationError);
}

TEST(Stft, AxesAndDominantBin) {
  std::vector<double> x(2048);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::sin(2 * oracle::kPi * 42e3 * n / 450e3);
  const auto s = stft(single(x), 256, 64);
  EXPECT_EQ(s.bins(), 129u);
  EXPECT_EQ(s.frames(), 1 + (2048 - 256) / 64);
  EXPECT_DOUBLE_EQ(s.frequencies[24], 24 * 450e3 / 256);
  EXPECT_DOUBLE_EQ(s.frame_times[2], (2 * 64 + 128) / 450e3);
  for (std::size_t f = 0; f < s.frames(); ++f) {
    std::size_t best = 0;
    for (std::size_t k = 0; k < s.bins(); ++k)
      if (std::abs(s.at(0, f, k)) > std::abs(s.at(0, f, best))) best = k;
    EXPECT_EQ(best, 24u);
  }
  EXPECT_EQ(nearest_bin(42e3, 450e3, 256), 24u);
}

TEST(Stft, MatchesNaiveDft) {
  const auto x = random_signal(600, 4);
  const auto s = stft(single(x), 128, 50);
  const auto win = hann_window(128);
  for (std::size_t f : {0u, 3u, 9u}) {
    std::vector<double> frame(128);
    for (std::size_t n = 0; n < 128; ++n) frame[n] = x[f * 50 + n] * win[n];
    const auto ref = oracle::naive_dft(frame);
    for (std::size_t k = 0; k < s.bins(); ++k) EXPECT_LT(std::abs(s.at(0, f, k) - ref[k]), 1e-9);
  }
}

TEST(Stft, ZeroSignalAndParseval) {
  const auto z = stft(single(std::vector<double>(512, 0.0)), 256, 64);
  for (const auto& v : z.values) EXPECT_EQ(v, std::complex<double>(0, 0));

  const auto x = random_signal(1000, 5);
  const auto s = stft(single(x), 256, 100);
  for (std::size_t f = 0; f < s.frames(); ++f) {
    double time_energy = 0;
    for (std::size_t n = 0; n < 256; ++n) time_energy += std::pow(x[f * 100 + n] * s.window[n], 2);
    double freq_energy = std::norm(s.at(0, f, 0)) + std::norm(s.at(0, f, 128));
    for (std::size_t k = 1; k < 128; ++k) freq_energy += 2 * std::norm(s.at(0, f, k));
    EXPECT_NEAR(freq_energy / 256, time_energy, 1e-6 * time_energy);
  }
}

TEST(Stft, BinCentredToneHasCompactSupport) {
  const double f0 = 24 * 450e3 / 256;
  std::vector<double> x(256);
  for (std::size_t n = 0; n < 256; ++n) x[n] = std::cos(2 * oracle::kPi * f0 * n / 450e3);
  const auto s = stft(single(x), 256, 256);
  for (std::size_t k = 0; k < s.bins(); ++k) {
    if (k >= 23 && k <= 25) EXPECT_GT(std::abs(s.at(0, 0, k)), 1.0);
    else EXPECT_LT(std::abs(s.at(0, 0, k)), 1e-9);
  }
}

TEST(Stft, RejectsLongWindow) {
  EXPECT_THROW(stft(single(std::vector<double>(100, 1.0)), 256, 64), ValidationError);
  EXPECT_THROW(stft(single(std::vector<double>(300, 1.0)), 256, 0), ValidationError);
}

TEST(Snapshot, RealisedFrequencyAndShape) {
  const auto w = single(random_signal(1024, 6));
  const auto s = stft(w, 256, 64);
  const auto obs = extract_snapshot(s, 42e3, 3);
  EXPECT_DOUBLE_EQ(obs.frequency, 42187.5);
  EXPECT_EQ(obs.x.size(), 1);
  EXPECT_DOUBLE_EQ(obs.frame_time, s.frame_times[3]);
  EXPECT_THROW(extract_snapshot(s, 230e3, 0), ValidationError);
  EXPECT_THROW(extract_snapshot(s, 42e3, s.frames()), ValidationError);
  const auto direct = snapshot_at(w, 256, 64, 42e3, 3);
  EXPECT_LT(std::abs(direct.x(0) - obs.x(0)), 1e-12 * std::abs(obs.x(0)));
}

TEST(Snapshot, BoresightToneEqualPhase) {
  const ArrayGeometry g(8, 8, 3.9e-3);
  const std::vector<synth::SourceSpec> src{{{0, 0}, synth::kInfinite, {synth::WaveformKind::tone, 42e3, 42e3, 5e-3}, 1}};
  const auto w = synth::synthesize_array_signals(g, kAir, src, 450e3, 5e-3, {});
  const auto obs = extract_snapshot(stft(w, 256, 64), 42e3, 5);
  for (Eigen::Index i = 1; i < obs.x.size(); ++i) EXPECT_LT(std::abs(std::arg(obs.x(i) / obs.x(0))), 1e-3);
}

TEST(Snapshot, PhasesMatchSteeringAtRealisedBin) {
  const ArrayGeometry g(8, 8, 3.9e-3);
  const double f = 24 * 450e3 / 256;
  const Direction d{30, 10};
  const std::vector<synth::SourceSpec> src{{d, synth::kInfinite, {synth::WaveformKind::tone, f, f, 5e-3}, 1}};
  const auto w = synth::synthesize_array_signals(g, kAir, src, 450e3, 5e-3, {});
  const auto obs = snapshot_at(w, 256, 64, 42e3, 10);
  const auto a = geometry::steering_vector(g, kAir, obs.frequency, d);
  const auto ref = obs.x(0) * std::conj(a(0));
  for (Eigen::Index i = 1; i < obs.x.size(); ++i)
    EXPECT_LT(std::abs(std::arg(obs.x(i) * std::conj(a(i)) / ref)), 0.01);
}

TEST(Snapshot, StrongestFrame) {
  std::vector<double> x(2000, 0.0);
  for (std::size_t n = 1200; n < 1456; ++n) x[n] = std::sin(2 * oracle::kPi * 42e3 * n / 450e3);
  const auto frame = strongest_frame(single(x), 256, 64, 42e3);
  EXPECT_NEAR(static_cast<double>(frame) * 64, 1200.0, 64.0);
}

}  // namespace
