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

#ifndef HIRIS_SYNTH_HPP
#define HIRIS_SYNTH_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hiris/geometry.hpp"
#include "hiris/signals.hpp"

namespace hiris::synth {

using geometry::ArrayGeometry;
using geometry::Direction;
using geometry::Medium;

enum class WaveformKind { tone, hyperbolic_chirp, dirac };

struct WaveformDescriptor {
  WaveformKind kind = WaveformKind::tone;
  double f_start = 40e3;   // Hz; the tone frequency for tones
  double f_end = 40e3;     // Hz
  double duration = 1e-3;  // s
};

void validate(const WaveformDescriptor& w, double sample_rate);

/// Instantaneous frequency of a hyperbolic (linear-period) chirp that sweeps
/// f_start at t = 0 to f_end at t = duration.
double chirp_frequency(const WaveformDescriptor& w, double t);

/// Continuous-time value of a tone or chirp at time t; zero outside
/// [0, duration). Not defined for dirac.
double waveform_value(const WaveformDescriptor& w, double t);

/// round(duration * fs) samples starting at t = 0. A dirac is a single unit
/// sample followed by zeros (at least one sample).
std::vector<double> generate_waveform(const WaveformDescriptor& w, double sample_rate);

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

struct SourceSpec {
  Direction direction;
  double range = kInfinite;  // m; infinity selects a pure plane wave
  WaveformDescriptor waveform;
  double level = 1.0;
};

struct Reflector {
  Direction direction;
  double range = 1.0;  // m
  double reflectivity = 1.0;
};

/// Per-channel white Gaussian noise at the given SNR, derived from
/// (seed, channel) so that output does not depend on scheduling.
struct NoiseSpec {
  double snr_db = kInfinite;
  std::uint64_t seed = 0;
};

/// Far-field arrival delay at element i relative to the array centroid:
/// -<p_i, u(d)> / v. Negative for elements nearer the source.
double arrival_delay(const ArrayGeometry& g, const Medium& m, std::size_t element,
                     const Direction& d);

/// Channel i = sum over sources of level * s(t - tau_i - range / v). Tones and
/// chirps are evaluated in closed form at the delayed time; diracs are
/// delayed by frequency-domain phase shift. Noise power per channel is the
/// channel's signal power divided by 10^(snr/10); an all-zero channel uses
/// unit reference power.
WaveformSet synthesize_array_signals(const ArrayGeometry& g, const Medium& m,
                                     std::span<const SourceSpec> sources, double sample_rate,
                                     double duration, const NoiseSpec& noise);

/// Monostatic pulse-echo scene: each reflector returns the emission delayed
/// by 2 r / v plus the per-element direction delay, scaled by reflectivity.
/// Silent scenes reference noise to the emission's mean-square power.
WaveformSet echo_scene(const ArrayGeometry& g, const Medium& m,
                       std::span<const Reflector> reflectors, const WaveformDescriptor& emission,
                       double sample_rate, double duration, const NoiseSpec& noise);

struct PdmOptions {
  int order = 2;          // 1 or 2
  double dither = 0.0;    // uniform dither amplitude added before the quantiser
  std::uint64_t seed = 0; // dither seed
};

/// Largest input magnitude accepted by pdm_modulate.
inline constexpr double kPdmMaxInput = 0.9;

/// Zero-order-hold upsampling to pdm_rate followed by an error-feedback
/// sigma-delta modulator with noise transfer function (1 - z^-1)^order and a
/// 1-bit quantiser (v >= 0 -> bit 1 / +1). State is reset per channel.
PdmStream pdm_modulate(const WaveformSet& w, double pdm_rate, const PdmOptions& options = {});

/// Per-channel modulator core on an already-upsampled signal.
void sigma_delta(std::span<const double> input, int order, double dither, std::uint64_t seed,
                 std::span<std::uint64_t> out_words);

}  // namespace hiris::synth

#endif  // HIRIS_SYNTH_HPP
