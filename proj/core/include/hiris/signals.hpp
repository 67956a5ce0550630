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

#ifndef HIRIS_SIGNALS_HPP
#define HIRIS_SIGNALS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hiris {

/// Real multichannel signals sharing one sample rate. Samples are stored
/// channel-major: samples[channel * length + n].
struct WaveformSet {
  double sample_rate = 0.0;
  std::size_t channels = 0;
  std::size_t length = 0;
  std::vector<double> samples;

  // Samples at each end influenced by zero-padded filter edges; consumers
  // should not rely on them.
  std::size_t settling_samples = 0;
  // Filter delay already removed from the time axis, in seconds.
  double compensated_delay_s = 0.0;

  WaveformSet() = default;
  WaveformSet(double rate, std::size_t n_channels, std::size_t n_samples)
      : sample_rate(rate), channels(n_channels), length(n_samples),
        samples(n_channels * n_samples, 0.0) {}

  std::span<double> channel(std::size_t c) { return {samples.data() + c * length, length}; }
  std::span<const double> channel(std::size_t c) const {
    return {samples.data() + c * length, length};
  }
};

/// 1-bit multichannel stream, one bit per channel per clock tick. Bit value 1
/// encodes +1 and 0 encodes -1. Each channel is packed into 64-bit words,
/// least-significant bit first.
class PdmStream {
 public:
  PdmStream() = default;
  PdmStream(double pdm_rate, std::size_t channels, std::size_t ticks)
      : pdm_rate_(pdm_rate), channels_(channels), ticks_(ticks),
        words_per_channel_((ticks + 63) / 64), words_(channels * words_per_channel_, 0) {}

  double pdm_rate() const { return pdm_rate_; }
  std::size_t channels() const { return channels_; }
  std::size_t ticks() const { return ticks_; }
  std::size_t words_per_channel() const { return words_per_channel_; }

  bool bit(std::size_t channel, std::size_t tick) const {
    return (words_[channel * words_per_channel_ + tick / 64] >> (tick % 64)) & 1u;
  }
  void set_bit(std::size_t channel, std::size_t tick, bool value) {
    std::uint64_t& w = words_[channel * words_per_channel_ + tick / 64];
    const std::uint64_t mask = std::uint64_t{1} << (tick % 64);
    w = value ? (w | mask) : (w & ~mask);
  }

  std::span<std::uint64_t> channel_words(std::size_t c) {
    return {words_.data() + c * words_per_channel_, words_per_channel_};
  }
  std::span<const std::uint64_t> channel_words(std::size_t c) const {
    return {words_.data() + c * words_per_channel_, words_per_channel_};
  }

  friend bool operator==(const PdmStream&, const PdmStream&) = default;

 private:
  double pdm_rate_ = 0.0;
  std::size_t channels_ = 0;
  std::size_t ticks_ = 0;
  std::size_t words_per_channel_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hiris

#endif  // HIRIS_SIGNALS_HPP
