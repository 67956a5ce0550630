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

#ifndef HIRIS_PDM_HPP
#define HIRIS_PDM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hiris/signals.hpp"

namespace hiris::pdm {

/// Linear-phase low-pass FIR. `cutoff` is the passband edge; the stopband
/// begins at cutoff + transition.
struct FirFilter {
  std::vector<double> taps;
  double cutoff = 0.0;
  double transition = 0.0;
  double stopband_atten_db = 0.0;
  double sample_rate = 0.0;

  std::size_t group_delay() const { return (taps.size() - 1) / 2; }
};

/// Kaiser-windowed sinc meeting the attenuation spec, odd length, unity DC
/// gain.
FirFilter design_lowpass(double sample_rate, double cutoff, double transition,
                         double stopband_atten_db);

/// Bits mapped to +/-1, filtered with zero-padded boundaries and decimated.
/// The filter's group delay is removed, so output sample n is centred on
/// tick n * decimation and every channel keeps its alignment. Only the kept
/// samples are computed.
WaveformSet pdm_demodulate(const PdmStream& p, const FirFilter& filter, std::size_t decimation);

struct DemodDefaults {
  static constexpr double cutoff = 100e3;
  static constexpr double transition = 50e3;
  static constexpr double stopband_atten_db = 80.0;
  static constexpr std::size_t decimation = 10;
};

struct ThroughputReport {
  std::size_t channels = 0;
  std::size_t ticks = 0;
  double seconds = 0.0;
  double ticks_per_second = 0.0;  // channel-ticks consumed per second
  double checksum = 0.0;          // sum of all output samples
};

/// Demodulates `channels` random streams of `ticks` bits at 4.5 MHz with the
/// default filter chain and times it.
ThroughputReport filter_throughput_bench(std::size_t channels, std::size_t ticks,
                                         std::uint64_t seed = 1);

}  // namespace hiris::pdm

#endif  // HIRIS_PDM_HPP
