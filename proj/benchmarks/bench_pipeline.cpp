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

#include <benchmark/benchmark.h>

#include <random>

#include "hiris/beamform.hpp"
#include "hiris/imaging.hpp"
#include "hiris/pdm.hpp"
#include "hiris/sampling.hpp"
#include "hiris/synth.hpp"

namespace {

using namespace hiris;

const geometry::Medium kAir{343.0};
const geometry::ArrayGeometry kArray(32, 32, 3.9e-3);

void BM_Demodulate(benchmark::State& state) {
  const auto channels = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kTicks = 45000;
  PdmStream stream(4.5e6, channels, kTicks);
  std::mt19937_64 rng(1);
  for (std::size_t c = 0; c < channels; ++c)
    for (auto& w : stream.channel_words(c)) w = rng();
  const auto filter = pdm::design_lowpass(4.5e6, 100e3, 50e3, 80.0);
  for (auto _ : state) benchmark::DoNotOptimize(pdm::pdm_demodulate(stream, filter, 10));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(channels * kTicks));
}
BENCHMARK(BM_Demodulate)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SigmaDelta(benchmark::State& state) {
  WaveformSet w(4.5e6, 1, 450000);
  for (std::size_t n = 0; n < w.length; ++n) w.samples[n] = 0.5 * std::sin(0.05 * static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(synth::pdm_modulate(w, 4.5e6));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.length));
}
BENCHMARK(BM_SigmaDelta)->Unit(benchmark::kMillisecond);

void BM_SmoothedCovariance(benchmark::State& state) {
  const std::vector<geometry::Direction> src{{30, 0}};
  const auto obs = imaging::narrowband_snapshot(kArray, kAir, 42e3, src, 5.0, 1);
  beamform::SmoothingParams p;
  p.sub_rows = p.sub_cols = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beamform::smoothed_covariance(obs, kArray, p));
}
BENCHMARK(BM_SmoothedCovariance)->Arg(16)->Arg(28)->Unit(benchmark::kMillisecond);

void BM_MvdrSpectrum(benchmark::State& state) {
  const std::vector<geometry::Direction> src{{30, 0}};
  const auto obs = imaging::narrowband_snapshot(kArray, kAir, 42e3, src, 5.0, 1);
  const auto ds = sampling::azimuth_scan(-90, 90, 180.0 / static_cast<double>(state.range(0) - 1), 0);
  beamform::SpatialFilterParams p;
  for (auto _ : state)
    benchmark::DoNotOptimize(beamform::spatial_spectrum(obs, kArray, kAir, p, ds.directions));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MvdrSpectrum)->Arg(181)->Arg(1801)->Unit(benchmark::kMillisecond);

void BM_EqPartition(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sampling::eq_sphere_partition(n, false));
}
BENCHMARK(BM_EqPartition)->Arg(1000)->Arg(100000);

void BM_Manifold(benchmark::State& state) {
  const auto ds = sampling::eq_sphere_partition(static_cast<std::size_t>(state.range(0)), true);
  for (auto _ : state)
    benchmark::DoNotOptimize(geometry::build_manifold(kArray, kAir, 42e3, ds.directions));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ds.size()));
}
BENCHMARK(BM_Manifold)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
