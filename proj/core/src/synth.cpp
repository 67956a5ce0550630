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

#include "hiris/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "hiris/delay.hpp"
#include "hiris/error.hpp"
#include "hiris/parallel.hpp"

namespace hiris::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 channel_rng(std::uint64_t seed, std::size_t channel, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(channel),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(channel) >> 32), stream};
  return std::mt19937_64(seq);
}

double mean_square(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

// One delayed copy of a waveform, added into a channel.
struct Arrival {
  const WaveformDescriptor* waveform;
  double amplitude;
  double delay_s;
};

// Adds every arrival for one channel. Dirac arrivals go through the shared
// band-limited delay line.
void render_channel(std::span<const Arrival> arrivals, double fs,
                    const std::optional<BandlimitedDelay>& impulse, std::span<double> out) {
  std::vector<double> scratch;
  for (const auto& a : arrivals) {
    if (a.amplitude == 0.0) continue;
    if (a.waveform->kind == WaveformKind::dirac) {
      scratch.resize(out.size());
      impulse->apply(a.delay_s * fs, scratch);
      for (std::size_t n = 0; n < out.size(); ++n) out[n] += a.amplitude * scratch[n];
    } else {
      for (std::size_t n = 0; n < out.size(); ++n)
        out[n] += a.amplitude * waveform_value(*a.waveform, static_cast<double>(n) / fs - a.delay_s);
    }
  }
}

void add_noise(WaveformSet& w, const NoiseSpec& noise, double silent_reference) {
  if (!std::isfinite(noise.snr_db)) return;
  const double ratio = std::pow(10.0, noise.snr_db / 10.0);
  parallel_for(w.channels, [&](std::size_t c) {
    auto ch = w.channel(c);
    double power = mean_square(ch);
    if (power == 0.0) power = silent_reference;
    const double sigma = std::sqrt(power / ratio);
    auto rng = channel_rng(noise.seed, c, 0x6e6f6973u);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : ch) v += normal(rng);
  });
}

std::size_t sample_count(double duration, double fs) {
  require(std::isfinite(duration) && duration > 0.0, "duration must be positive");
  return static_cast<std::size_t>(std::llround(duration * fs));
}

double max_abs_delay(const ArrayGeometry& g, const Medium& m, const Direction& d) {
  double out = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) out = std::max(out, std::abs(arrival_delay(g, m, i, d)));
  return out;
}

}  // namespace

void validate(const WaveformDescriptor& w, double sample_rate) {
  require(std::isfinite(sample_rate) && sample_rate > 0.0, "sample rate must be positive");
  if (w.kind == WaveformKind::dirac) {
    require(std::isfinite(w.duration) && w.duration >= 0.0, "dirac duration must be >= 0");
    return;
  }
  require(std::isfinite(w.duration) && w.duration > 0.0, "waveform duration must be positive");
  const double nyquist = 0.5 * sample_rate;
  require(w.f_start > 0.0 && w.f_start < nyquist,
          "waveform start frequency must lie in (0, fs/2): sample rate too low");
  if (w.kind == WaveformKind::hyperbolic_chirp) {
    require(w.f_end > 0.0 && w.f_end < nyquist,
            "waveform end frequency must lie in (0, fs/2): sample rate too low");
  }
}

double chirp_frequency(const WaveformDescriptor& w, double t) {
  const double T = w.duration;
  return w.f_start * w.f_end * T / (w.f_end * T + (w.f_start - w.f_end) * t);
}

double waveform_value(const WaveformDescriptor& w, double t) {
  if (t < 0.0 || t >= w.duration) return 0.0;
  switch (w.kind) {
    case WaveformKind::tone:
      return std::sin(kTwoPi * w.f_start * t);
    case WaveformKind::hyperbolic_chirp: {
      const double f0 = w.f_start;
      const double f1 = w.f_end;
      if (f0 == f1) return std::sin(kTwoPi * f0 * t);
      const double T = w.duration;
      // Phase is 2 pi times the integral of chirp_frequency over [0, t].
      const double phase =
          kTwoPi * f0 * f1 * T / (f0 - f1) * std::log1p((f0 - f1) * t / (f1 * T));
      return std::sin(phase);
    }
    case WaveformKind::dirac:
      break;
  }
  throw ValidationError("dirac waveform has no closed-form value");
}

std::vector<double> generate_waveform(const WaveformDescriptor& w, double sample_rate) {
  validate(w, sample_rate);
  if (w.kind == WaveformKind::dirac) {
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(w.duration * sample_rate)));
    std::vector<double> out(n, 0.0);
    out[0] = 1.0;
    return out;
  }
  const auto n = static_cast<std::size_t>(std::llround(w.duration * sample_rate));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = waveform_value(w, static_cast<double>(i) / sample_rate);
  return out;
}

double arrival_delay(const ArrayGeometry& g, const Medium& m, std::size_t element,
                     const Direction& d) {
  return -g.position(element).dot(geometry::unit_vector(d)) / m.speed_of_sound;
}

WaveformSet synthesize_array_signals(const ArrayGeometry& g, const Medium& m,
                                     std::span<const SourceSpec> sources, double sample_rate,
                                     double duration, const NoiseSpec& noise) {
  geometry::validate(m);
  require(!(sources.empty() && !std::isfinite(noise.snr_db)),
          "scene has no sources and no noise: output would be all zeros");
  const std::size_t n = sample_count(duration, sample_rate);
  double aperture_delay = 0.0;
  double max_shift = 0.0;
  bool has_impulse = false;
  for (const auto& s : sources) {
    geometry::validate(s.direction);
    validate(s.waveform, sample_rate);
    require(s.level >= 0.0 && std::isfinite(s.level), "source level must be >= 0");
    require(s.range > 0.0, "source range must be positive (or infinite)");
    const double spread = max_abs_delay(g, m, s.direction);
    aperture_delay = std::max(aperture_delay, 2.0 * spread);
    const double bulk = std::isfinite(s.range) ? s.range / m.speed_of_sound : 0.0;
    max_shift = std::max(max_shift, (bulk + spread) * sample_rate);
    has_impulse = has_impulse || s.waveform.kind == WaveformKind::dirac;
  }
  require(duration >= aperture_delay, "duration shorter than the inter-element delay span");

  std::optional<BandlimitedDelay> impulse;
  if (has_impulse) {
    std::vector<double> delta(n, 0.0);
    delta[0] = 1.0;
    impulse.emplace(delta, max_shift);
  }

  WaveformSet out(sample_rate, g.size(), n);
  parallel_for(g.size(), [&](std::size_t c) {
    std::vector<Arrival> arrivals;
    arrivals.reserve(sources.size());
    for (const auto& s : sources) {
      const double bulk = std::isfinite(s.range) ? s.range / m.speed_of_sound : 0.0;
      arrivals.push_back({&s.waveform, s.level, bulk + arrival_delay(g, m, c, s.direction)});
    }
    render_channel(arrivals, sample_rate, impulse, out.channel(c));
  });
  add_noise(out, noise, 1.0);
  return out;
}

WaveformSet echo_scene(const ArrayGeometry& g, const Medium& m,
                       std::span<const Reflector> reflectors, const WaveformDescriptor& emission,
                       double sample_rate, double duration, const NoiseSpec& noise) {
  geometry::validate(m);
  validate(emission, sample_rate);
  const std::size_t n = sample_count(duration, sample_rate);
  double max_shift = 0.0;
  for (const auto& r : reflectors) {
    geometry::validate(r.direction);
    require(std::isfinite(r.range) && r.range > 0.0, "reflector range must be positive");
    require(std::isfinite(r.reflectivity) && r.reflectivity >= 0.0,
            "reflectivity must be >= 0");
    const double round_trip = 2.0 * r.range / m.speed_of_sound;
    require(round_trip + emission.duration <= duration,
            "reflector at " + std::to_string(r.range) + " m lies beyond the duration window");
    max_shift = std::max(max_shift, (round_trip + max_abs_delay(g, m, r.direction)) * sample_rate);
  }
  require(!(reflectors.empty() && !std::isfinite(noise.snr_db)),
          "scene has no reflectors and no noise: output would be all zeros");

  std::optional<BandlimitedDelay> impulse;
  if (emission.kind == WaveformKind::dirac) {
    std::vector<double> delta(n, 0.0);
    delta[0] = 1.0;
    impulse.emplace(delta, max_shift);
  }

  WaveformSet out(sample_rate, g.size(), n);
  parallel_for(g.size(), [&](std::size_t c) {
    std::vector<Arrival> arrivals;
    arrivals.reserve(reflectors.size());
    for (const auto& r : reflectors) {
      const double round_trip = 2.0 * r.range / m.speed_of_sound;
      arrivals.push_back({&emission, r.reflectivity, round_trip + arrival_delay(g, m, c, r.direction)});
    }
    render_channel(arrivals, sample_rate, impulse, out.channel(c));
  });
  add_noise(out, noise, mean_square(generate_waveform(emission, sample_rate)));
  return out;
}

void sigma_delta(std::span<const double> input, int order, double dither, std::uint64_t seed,
                 std::span<std::uint64_t> out_words) {
  std::fill(out_words.begin(), out_words.end(), 0);
  double e1 = 0.0;  // quantisation error one tick back
  double e2 = 0.0;  // two ticks back
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-dither, dither);
  for (std::size_t t = 0; t < input.size(); ++t) {
    double v = order == 1 ? input[t] - e1 : input[t] - 2.0 * e1 + e2;
    const double q = v + (dither > 0.0 ? uniform(rng) : 0.0);
    const double y = q >= 0.0 ? 1.0 : -1.0;
    if (y > 0.0) out_words[t / 64] |= std::uint64_t{1} << (t % 64);
    e2 = e1;
    e1 = y - v;
  }
}

PdmStream pdm_modulate(const WaveformSet& w, double pdm_rate, const PdmOptions& options) {
  require(options.order == 1 || options.order == 2, "modulator order must be 1 or 2");
  require(std::isfinite(pdm_rate) && pdm_rate > 0.0, "PDM rate must be positive");
  require(w.sample_rate > 0.0, "input sample rate must be positive");
  require(options.dither >= 0.0, "dither amplitude must be >= 0");
  const double ratio_real = pdm_rate / w.sample_rate;
  const auto ratio = static_cast<std::size_t>(std::llround(ratio_real));
  require(ratio >= 1 && std::abs(ratio_real - static_cast<double>(ratio)) < 1e-9 * ratio_real,
          "PDM rate must be an integer multiple of the input sample rate");
  for (double v : w.samples) {
    require(std::abs(v) <= kPdmMaxInput,
            "modulator input exceeds the stable range |x| <= 0.9");
  }

  PdmStream out(pdm_rate, w.channels, w.length * ratio);
  parallel_for(w.channels, [&](std::size_t c) {
    const auto in = w.channel(c);
    std::vector<double> held(in.size() * ratio);
    for (std::size_t n = 0; n < in.size(); ++n)
      std::fill_n(held.begin() + static_cast<std::ptrdiff_t>(n * ratio), ratio, in[n]);
    sigma_delta(held, options.order, options.dither, options.seed ^ (0x9e3779b97f4a7c15ull * (c + 1)),
                out.channel_words(c));
  });
  return out;
}

}  // namespace hiris::synth
