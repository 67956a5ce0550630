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

#ifndef HIRIS_SPECTRAL_HPP
#define HIRIS_SPECTRAL_HPP

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hiris/signals.hpp"

namespace hiris::spectral {

/// Linear cross-correlation of every channel with `base` (pulse
/// compression). Output n = sum_m base[m] * x[n + m], so an echo arriving at
/// delay tau peaks at n = tau * fs. A unit impulse as base is the identity.
WaveformSet matched_filter(const WaveformSet& w, std::span<const double> base);

/// Periodic Hann window.
std::vector<double> hann_window(std::size_t length);

struct Stft {
  double sample_rate = 0.0;
  std::size_t channels = 0;
  std::size_t window_length = 0;
  std::size_t hop = 0;
  std::vector<double> window;
  std::vector<double> frame_times;   // s, centre of each frame
  std::vector<double> frequencies;   // Hz, k * fs / window_length
  std::vector<std::complex<double>> values;  // [channel][frame][bin]

  std::size_t frames() const { return frame_times.size(); }
  std::size_t bins() const { return frequencies.size(); }
  const std::complex<double>& at(std::size_t channel, std::size_t frame, std::size_t bin) const {
    return values[(channel * frames() + frame) * bins() + bin];
  }
};

std::size_t frame_count(std::size_t signal_length, std::size_t window_length, std::size_t hop);

/// Centre time of a frame in seconds.
double frame_time(std::size_t frame, std::size_t window_length, std::size_t hop,
                  double sample_rate);

/// Hann-windowed one-sided DFT of frames starting at multiples of hop.
Stft stft(const WaveformSet& w, std::size_t window_length, std::size_t hop);

/// One complex value per microphone at one time-frequency cell.
struct ObservationMatrix {
  double frequency = 0.0;  // realised bin centre, Hz
  double frame_time = 0.0; // s
  Eigen::VectorXcd x;
};

/// Index of the bin whose centre frequency is nearest f_target.
std::size_t nearest_bin(double f_target, double sample_rate, std::size_t window_length);

ObservationMatrix extract_snapshot(const Stft& s, double f_target, std::size_t frame);

/// Same cell as extract_snapshot(stft(w, ...), ...) computed directly with a
/// single-bin DFT per channel.
ObservationMatrix snapshot_at(const WaveformSet& w, std::size_t window_length, std::size_t hop,
                              double f_target, std::size_t frame);

/// Frame whose target-bin energy, summed over channels, is largest.
std::size_t strongest_frame(const WaveformSet& w, std::size_t window_length, std::size_t hop,
                            double f_target);

}  // namespace hiris::spectral

#endif  // HIRIS_SPECTRAL_HPP
