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

#include "hiris/pdm.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "hiris/error.hpp"
#include "hiris/parallel.hpp"

namespace hiris::pdm {
namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Four independent partial sums; fixed order keeps results reproducible.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

FirFilter design_lowpass(double sample_rate, double cutoff, double transition,
                         double stopband_atten_db) {
  require(std::isfinite(sample_rate) && sample_rate > 0.0, "sample rate must be positive");
  require(cutoff > 0.0 && transition > 0.0, "cutoff and transition must be positive");
  require(cutoff + transition < 0.5 * sample_rate,
          "filter spec infeasible: cutoff + transition must stay below fs/2");
  require(stopband_atten_db > 0.0, "stopband attenuation must be positive");

  const double a = stopband_atten_db;
  double beta = 0.0;
  if (a > 50.0) {
    beta = 0.1102 * (a - 8.7);
  } else if (a >= 21.0) {
    beta = 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  }
  const double dw = 2.0 * std::numbers::pi * transition / sample_rate;
  auto length = static_cast<std::size_t>(std::ceil((a - 7.95) / (2.285 * dw))) + 1;
  if (length < 3) length = 3;
  if (length % 2 == 0) ++length;

  const double fc = (cutoff + 0.5 * transition) / sample_rate;  // normalised sinc edge
  const double centre = 0.5 * static_cast<double>(length - 1);
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  FirFilter f;
  f.taps.resize(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double x = (static_cast<double>(n) - centre) / centre;
    const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - x * x))) / i0_beta;
    f.taps[n] = 2.0 * fc * sinc(2.0 * fc * (static_cast<double>(n) - centre)) * window;
  }
  // Symmetrise exactly and normalise to unity DC gain.
  for (std::size_t n = 0; n < length / 2; ++n) {
    const double avg = 0.5 * (f.taps[n] + f.taps[length - 1 - n]);
    f.taps[n] = f.taps[length - 1 - n] = avg;
  }
  const double dc = std::accumulate(f.taps.begin(), f.taps.end(), 0.0);
  for (double& t : f.taps) t /= dc;

  f.cutoff = cutoff;
  f.transition = transition;
  f.stopband_atten_db = stopband_atten_db;
  f.sample_rate = sample_rate;
  return f;
}

WaveformSet pdm_demodulate(const PdmStream& p, const FirFilter& filter, std::size_t decimation) {
  require(decimation >= 1, "decimation must be >= 1");
  require(!filter.taps.empty() && filter.taps.size() % 2 == 1, "filter must have odd length");
  require(std::abs(filter.sample_rate - p.pdm_rate()) <= 1e-9 * p.pdm_rate(),
          "filter was designed for a different sample rate than the PDM stream");
  const double out_rate = p.pdm_rate() / static_cast<double>(decimation);
  require(out_rate > 2.0 * filter.cutoff,
          "decimated rate violates Nyquist for the filter cutoff");

  const std::size_t ticks = p.ticks();
  const std::size_t out_len = (ticks + decimation - 1) / decimation;
  const std::size_t taps = filter.taps.size();
  const std::size_t delay = filter.group_delay();

  WaveformSet out(out_rate, p.channels(), out_len);
  out.settling_samples = (delay + decimation - 1) / decimation;
  out.compensated_delay_s = static_cast<double>(delay) / p.pdm_rate();

  parallel_for(p.channels(), [&](std::size_t c) {
    // Zero-padded +/-1 signal: padded[j + delay] = x[j].
    std::vector<double> padded(ticks + 2 * delay, 0.0);
    const auto words = p.channel_words(c);
    for (std::size_t t = 0; t < ticks; ++t)
      padded[t + delay] = ((words[t / 64] >> (t % 64)) & 1u) ? 1.0 : -1.0;
    auto dst = out.channel(c);
    // Symmetric taps: y[n] = sum_k h[k] x[n D - delay + k].
    for (std::size_t n = 0; n < out_len; ++n)
      dst[n] = dot(filter.taps.data(), padded.data() + n * decimation, taps);
  });
  return out;
}

ThroughputReport filter_throughput_bench(std::size_t channels, std::size_t ticks,
                                         std::uint64_t seed) {
  ThroughputReport report;
  report.channels = channels;
  report.ticks = ticks;
  if (channels == 0 || ticks == 0) return report;

  constexpr double kRate = 4.5e6;
  PdmStream stream(kRate, channels, ticks);
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < channels; ++c)
    for (auto& w : stream.channel_words(c)) w = rng();
  const FirFilter filter = design_lowpass(kRate, DemodDefaults::cutoff, DemodDefaults::transition,
                                          DemodDefaults::stopband_atten_db);

  const auto start = std::chrono::steady_clock::now();
  const WaveformSet out = pdm_demodulate(stream, filter, DemodDefaults::decimation);
  const auto stop = std::chrono::steady_clock::now();

  report.seconds = std::chrono::duration<double>(stop - start).count();
  report.ticks_per_second = static_cast<double>(channels * ticks) / report.seconds;
  report.checksum = std::accumulate(out.samples.begin(), out.samples.end(), 0.0);
  return report;
}

}  // namespace hiris::pdm
