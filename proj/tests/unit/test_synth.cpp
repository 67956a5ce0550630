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
#include "hiris/parallel.hpp"
#include "hiris/spectral.hpp"
#include "hiris/synth.hpp"
#include "oracles.hpp"

namespace {

using namespace hiris;
using namespace hiris::synth;
using geometry::ArrayGeometry;
using geometry::Direction;

const Medium kAir{343.0};
const ArrayGeometry kHiris(32, 32, 3.9e-3);

double bit_density(const PdmStream& p, std::size_t c, std::size_t skip = 0) {
  std::size_t ones = 0;
  for (std::size_t t = skip; t < p.ticks(); ++t) ones += p.bit(c, t);
  return static_cast<double>(ones) / static_cast<double>(p.ticks() - skip);
}

TEST(Waveform, Dirac) {
  const auto d = generate_waveform({WaveformKind::dirac, 0, 0, 1e-4}, 450e3);
  ASSERT_EQ(d.size(), 45u);
  EXPECT_EQ(d[0], 1.0);
  EXPECT_TRUE(std::all_of(d.begin() + 1, d.end(), [](double v) { return v == 0.0; }));
  EXPECT_EQ(generate_waveform({WaveformKind::dirac, 0, 0, 0.0}, 450e3).size(), 1u);
}

TEST(Waveform, ToneSpectrumPeak) {
  const auto x = generate_waveform({WaveformKind::tone, 40e3, 40e3, 1e-3}, 450e3);
  ASSERT_EQ(x.size(), 450u);
  const auto spec = oracle::naive_dft(x);
  std::size_t best = 0;
  for (std::size_t k = 1; k <= 225; ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  EXPECT_EQ(best, 40u);  // 1 kHz bins
}

TEST(Waveform, ChirpInstantaneousFrequency) {
  const WaveformDescriptor w{WaveformKind::hyperbolic_chirp, 45e3, 25e3, 2e-3};
  EXPECT_NEAR(chirp_frequency(w, 0.0), 45e3, 1e-6);
  EXPECT_NEAR(chirp_frequency(w, 2e-3), 25e3, 1e-6);
  // Period is linear in time for a hyperbolic sweep.
  const double p0 = 1 / chirp_frequency(w, 0), p1 = 1 / chirp_frequency(w, 1e-3),
               p2 = 1 / chirp_frequency(w, 2e-3);
  EXPECT_NEAR(p1 - p0, p2 - p1, 1e-15);

  // Zero-crossing estimate on a densely sampled copy.
  const double fs = 20e6;
  const auto x = generate_waveform(w, fs);
  std::vector<double> crossings;
  for (std::size_t n = 1; n < x.size(); ++n) {
    if ((x[n - 1] < 0) != (x[n] < 0)) {
      const double frac = x[n - 1] / (x[n - 1] - x[n]);
      crossings.push_back((static_cast<double>(n - 1) + frac) / fs);
    }
  }
  ASSERT_GT(crossings.size(), 10u);
  auto estimate_at = [&](double t) {
    std::size_t i = 0;
    while (i + 3 < crossings.size() && crossings[i + 1] < t) ++i;
    i = std::min(i, crossings.size() - 3);
    return 1.0 / (crossings[i + 2] - crossings[i]);
  };
  for (double t : {0.0, 1e-3, 2e-3})
    EXPECT_NEAR(estimate_at(t) / chirp_frequency(w, t), 1.0, 0.01) << "t=" << t;
}

TEST(Waveform, RejectsAliasing) {
  EXPECT_THROW(generate_waveform({WaveformKind::tone, 40e3, 40e3, 1e-3}, 70e3), ValidationError);
  EXPECT_THROW(generate_waveform({WaveformKind::hyperbolic_chirp, 45e3, 300e3, 1e-3}, 450e3),
               ValidationError);
  EXPECT_THROW(generate_waveform({WaveformKind::tone, 40e3, 40e3, 0.0}, 450e3), ValidationError);
}

TEST(Synthesis, BoresightChannelsIdentical) {
  const std::vector<SourceSpec> src{{{0, 0}, kInfinite, {WaveformKind::tone, 40e3, 40e3, 1e-3}, 1}};
  const auto w = synthesize_array_signals(kHiris, kAir, src, 450e3, 1e-3, {});
  ASSERT_EQ(w.channels, 1024u);
  for (std::size_t c = 1; c < w.channels; ++c)
    for (std::size_t n = 0; n < w.length; n += 7)
      ASSERT_NEAR(w.channel(c)[n], w.channel(0)[n], 1e-9);
}

TEST(Synthesis, BoresightDiracChannelsIdentical) {
  const ArrayGeometry g(4, 4, 3.9e-3);
  const std::vector<SourceSpec> src{{{0, 0}, 0.5, {WaveformKind::dirac, 0, 0, 0}, 1}};
  const auto w = synthesize_array_signals(g, kAir, src, 450e3, 4e-3, {});
  for (std::size_t c = 1; c < w.channels; ++c)
    for (std::size_t n = 0; n < w.length; ++n) ASSERT_NEAR(w.channel(c)[n], w.channel(0)[n], 1e-9);
}

TEST(Synthesis, AdjacentElementPhaseAt30Degrees) {
  const ArrayGeometry g(1, 2, 3.9e-3);
  const double f = 42e3, fs = 450e3;
  const std::vector<SourceSpec> src{{{30, 0}, kInfinite, {WaveformKind::tone, f, f, 10e-3}, 1}};
  const auto w = synthesize_array_signals(g, kAir, src, fs, 10e-3, {});
  // 1500 samples = 140 whole cycles.
  std::vector<double> a(w.channel(0).begin() + 100, w.channel(0).begin() + 1600);
  std::vector<double> b(w.channel(1).begin() + 100, w.channel(1).begin() + 1600);
  const double dphi = std::arg(oracle::dft_at(b, f, fs) / oracle::dft_at(a, f, fs));
  EXPECT_NEAR(dphi, 2 * oracle::kPi * f * 3.9e-3 * 0.5 / 343.0, 1e-6);
  EXPECT_NEAR(dphi, 1.50027, 1e-5);
}

TEST(Synthesis, PhasesMatchSteeringVector) {
  const ArrayGeometry g(8, 8, 3.9e-3);
  const double f = 42e3, fs = 450e3;
  const Direction d{-25, 17};
  const std::vector<SourceSpec> src{{d, kInfinite, {WaveformKind::tone, f, f, 10e-3}, 1}};
  const auto w = synthesize_array_signals(g, kAir, src, fs, 10e-3, {});
  const auto a = geometry::steering_vector(g, kAir, f, d);
  std::complex<double> ref;
  for (std::size_t c = 0; c < g.size(); ++c) {
    std::vector<double> x(w.channel(c).begin() + 150, w.channel(c).begin() + 1650);
    const auto v = oracle::dft_at(x, f, fs) * std::conj(a(c));
    if (c == 0) ref = v;
    EXPECT_LT(std::abs(std::arg(v / ref)), 1e-6) << "channel " << c;
  }
}

TEST(Synthesis, MeasuredSnr) {
  const ArrayGeometry g(4, 4, 3.9e-3);
  const std::vector<SourceSpec> src{{{10, 5}, kInfinite, {WaveformKind::tone, 40e3, 40e3, 20e-3}, 1}};
  const auto clean = synthesize_array_signals(g, kAir, src, 450e3, 20e-3, {});
  const auto noisy = synthesize_array_signals(g, kAir, src, 450e3, 20e-3, {5.0, 42});
  for (std::size_t c = 0; c < g.size(); ++c) {
    double ps = 0, pn = 0;
    for (std::size_t n = 0; n < clean.length; ++n) {
      ps += clean.channel(c)[n] * clean.channel(c)[n];
      const double e = noisy.channel(c)[n] - clean.channel(c)[n];
      pn += e * e;
    }
    EXPECT_NEAR(10 * std::log10(ps / pn), 5.0, 0.5);
  }
}

TEST(Synthesis, DeterministicAndScheduleIndependent) {
  const ArrayGeometry g(4, 4, 3.9e-3);
  const std::vector<SourceSpec> src{{{20, 0}, kInfinite, {WaveformKind::tone, 40e3, 40e3, 2e-3}, 1}};
  set_worker_count(1);
  const auto a = synthesize_array_signals(g, kAir, src, 450e3, 2e-3, {5.0, 7});
  set_worker_count(3);
  const auto b = synthesize_array_signals(g, kAir, src, 450e3, 2e-3, {5.0, 7});
  set_worker_count(0);
  const auto c = synthesize_array_signals(g, kAir, src, 450e3, 2e-3, {5.0, 8});
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
}

TEST(Synthesis, RejectsSilentScene) {
  EXPECT_THROW(synthesize_array_signals(kHiris, kAir, {}, 450e3, 1e-3, {}), ValidationError);
  EXPECT_NO_THROW(synthesize_array_signals(ArrayGeometry(2, 2, 1e-3), kAir, {}, 450e3, 1e-3,
                                           {0.0, 1}));
}

TEST(Echo, MatchedFilterPeakAtRoundTrip) {
  const ArrayGeometry g(2, 2, 3.9e-3);
  const WaveformDescriptor chirp{WaveformKind::hyperbolic_chirp, 45e3, 25e3, 2e-3};
  const std::vector<Reflector> r{{{0, 0}, 1.0, 1.0}};
  const auto w = echo_scene(g, kAir, r, chirp, 450e3, 10e-3, {});
  const auto base = generate_waveform(chirp, 450e3);
  const auto mf = spectral::matched_filter(w, base);
  const auto ch = mf.channel(0);
  const auto peak = std::distance(ch.begin(), std::max_element(ch.begin(), ch.end(), [](double a, double b) {
                                    return std::abs(a) < std::abs(b);
                                  }));
  EXPECT_NEAR(static_cast<double>(peak), 5.831e-3 * 450e3, 1.0);
}

TEST(Echo, TwoReflectorsSeparation) {
  const ArrayGeometry g(1, 1, 3.9e-3);
  const WaveformDescriptor chirp{WaveformKind::hyperbolic_chirp, 45e3, 25e3, 2e-3};
  const std::vector<Reflector> r{{{0, 0}, 1.0, 1.0}, {{0, 0}, 1.5, 1.0}};
  const auto w = echo_scene(g, kAir, r, chirp, 450e3, 14e-3, {});
  const auto mf = spectral::matched_filter(w, generate_waveform(chirp, 450e3));
  const auto ch = mf.channel(0);
  auto argmax_in = [&](std::size_t lo, std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t n = lo; n < hi; ++n)
      if (std::abs(ch[n]) > std::abs(ch[best])) best = n;
    return best;
  };
  const auto p1 = argmax_in(2000, 3300), p2 = argmax_in(3300, 5000);
  EXPECT_NEAR((static_cast<double>(p2) - static_cast<double>(p1)) / 450e3, 2.915e-3, 1.5 / 450e3);
}

TEST(Echo, ZeroReflectivityIsPureNoise) {
  const ArrayGeometry g(2, 2, 3.9e-3);
  const WaveformDescriptor chirp{WaveformKind::hyperbolic_chirp, 45e3, 25e3, 2e-3};
  const std::vector<Reflector> r{{{0, 0}, 1.0, 0.0}};
  const auto noise_only = echo_scene(g, kAir, std::vector<Reflector>{}, chirp, 450e3, 10e-3, {10.0, 3});
  const auto zero = echo_scene(g, kAir, r, chirp, 450e3, 10e-3, {10.0, 3});
  EXPECT_EQ(zero.samples, noise_only.samples);
  const std::vector<Reflector> far{{{0, 0}, 2.0, 1.0}};
  EXPECT_THROW(echo_scene(g, kAir, far, chirp, 450e3, 10e-3, {}), ValidationError);
}

TEST(Pdm, BitDensityTracksInput) {
  for (int order : {1, 2}) {
    for (double x : {0.0, 0.5, -0.3}) {
      WaveformSet w(4.5e6, 1, 20000);
      std::fill(w.samples.begin(), w.samples.end(), x);
      const auto p = pdm_modulate(w, 4.5e6, {order, 0.0, 0});
      EXPECT_NEAR(bit_density(p, 0), (1 + x) / 2, 0.01) << "order " << order << " x " << x;
    }
  }
}

TEST(Pdm, UpsamplesByIntegerRatio) {
  WaveformSet w(450e3, 2, 100);
  const auto p = pdm_modulate(w, 4.5e6);
  EXPECT_EQ(p.ticks(), 1000u);
  EXPECT_EQ(p.channels(), 2u);
  EXPECT_THROW(pdm_modulate(w, 4.4e6), ValidationError);
  w.samples[3] = 0.95;
  EXPECT_THROW(pdm_modulate(w, 4.5e6), ValidationError);
  EXPECT_THROW(pdm_modulate(WaveformSet(450e3, 1, 10), 4.5e6, {3, 0, 0}), ValidationError);
}

TEST(Pdm, DeterministicPerChannel) {
  WaveformSet w(450e3, 3, 500);
  for (std::size_t i = 0; i < w.samples.size(); ++i) w.samples[i] = 0.4 * std::sin(0.01 * i);
  set_worker_count(1);
  const auto a = pdm_modulate(w, 4.5e6, {2, 0.1, 5});
  set_worker_count(2);
  const auto b = pdm_modulate(w, 4.5e6, {2, 0.1, 5});
  set_worker_count(0);
  EXPECT_TRUE(a == b);
}

}  // namespace
