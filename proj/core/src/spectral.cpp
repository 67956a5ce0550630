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

#include "hiris/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hiris/error.hpp"
#include "hiris/fft.hpp"
#include "hiris/parallel.hpp"

namespace hiris::spectral {
namespace {

using cdouble = std::complex<double>;

bool is_unit_impulse(std::span<const double> base) {
  if (base.empty() || base[0] != 1.0) return false;
  return std::all_of(base.begin() + 1, base.end(), [](double v) { return v == 0.0; });
}

void check_frames(std::size_t length, std::size_t window_length, std::size_t hop) {
  require(window_length >= 2, "STFT window must have at least two samples");
  require(hop >= 1, "STFT hop must be >= 1");
  require(window_length <= length, "STFT window longer than the signal");
}

}  // namespace

WaveformSet matched_filter(const WaveformSet& w, std::span<const double> base) {
  require(!base.empty(), "matched filter base signal is empty");
  require(std::any_of(base.begin(), base.end(), [](double v) { return v != 0.0; }),
          "matched filter base signal is all zeros");
  if (is_unit_impulse(base)) return w;

  const std::size_t n = w.length;
  const std::size_t p = fft::good_size(n + base.size() - 1);
  std::vector<cdouble> base_spectrum(p, 0.0);
  std::copy(base.begin(), base.end(), base_spectrum.begin());
  fft::forward(base_spectrum);
  for (auto& v : base_spectrum) v = std::conj(v);

  WaveformSet out = w;
  parallel_for(w.channels, [&](std::size_t c) {
    std::vector<cdouble> work(p, 0.0);
    const auto src = w.channel(c);
    std::copy(src.begin(), src.end(), work.begin());
    fft::forward(work);
    for (std::size_t k = 0; k < p; ++k) work[k] *= base_spectrum[k];
    fft::inverse(work);
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < n; ++i) dst[i] = work[i].real();
  });
  return out;
}

std::vector<double> hann_window(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(length));
  return w;
}

std::size_t frame_count(std::size_t signal_length, std::size_t window_length, std::size_t hop) {
  if (window_length > signal_length || hop == 0) return 0;
  return 1 + (signal_length - window_length) / hop;
}

double frame_time(std::size_t frame, std::size_t window_length, std::size_t hop,
                  double sample_rate) {
  return (static_cast<double>(frame * hop) + 0.5 * static_cast<double>(window_length)) /
         sample_rate;
}

Stft stft(const WaveformSet& w, std::size_t window_length, std::size_t hop) {
  check_frames(w.length, window_length, hop);
  Stft s;
  s.sample_rate = w.sample_rate;
  s.channels = w.channels;
  s.window_length = window_length;
  s.hop = hop;
  s.window = hann_window(window_length);
  const std::size_t frames = frame_count(w.length, window_length, hop);
  const std::size_t bins = window_length / 2 + 1;
  for (std::size_t f = 0; f < frames; ++f)
    s.frame_times.push_back(frame_time(f, window_length, hop, w.sample_rate));
  for (std::size_t k = 0; k < bins; ++k)
    s.frequencies.push_back(static_cast<double>(k) * w.sample_rate / static_cast<double>(window_length));
  s.values.assign(w.channels * frames * bins, 0.0);

  parallel_for(w.channels, [&](std::size_t c) {
    const auto x = w.channel(c);
    std::vector<cdouble> work(window_length);
    for (std::size_t f = 0; f < frames; ++f) {
      for (std::size_t n = 0; n < window_length; ++n) work[n] = x[f * hop + n] * s.window[n];
      fft::forward(work);
      std::copy_n(work.begin(), bins, s.values.begin() + static_cast<std::ptrdiff_t>((c * frames + f) * bins));
    }
  });
  return s;
}

std::size_t nearest_bin(double f_target, double sample_rate, std::size_t window_length) {
  require(std::isfinite(f_target) && f_target >= 0.0, "target frequency must be >= 0");
  require(f_target <= 0.5 * sample_rate, "target frequency above Nyquist");
  const double spacing = sample_rate / static_cast<double>(window_length);
  // Round half down so that exact midpoints select the lower bin.
  const auto bin = static_cast<std::size_t>(std::ceil(f_target / spacing - 0.5));
  return std::min(bin, window_length / 2);
}

ObservationMatrix extract_snapshot(const Stft& s, double f_target, std::size_t frame) {
  require(frame < s.frames(), "frame index out of range");
  const std::size_t bin = nearest_bin(f_target, s.sample_rate, s.window_length);
  ObservationMatrix obs;
  obs.frequency = s.frequencies[bin];
  obs.frame_time = s.frame_times[frame];
  obs.x.resize(static_cast<Eigen::Index>(s.channels));
  for (std::size_t c = 0; c < s.channels; ++c) obs.x(static_cast<Eigen::Index>(c)) = s.at(c, frame, bin);
  return obs;
}

ObservationMatrix snapshot_at(const WaveformSet& w, std::size_t window_length, std::size_t hop,
                              double f_target, std::size_t frame) {
  check_frames(w.length, window_length, hop);
  require(frame < frame_count(w.length, window_length, hop), "frame index out of range");
  const std::size_t bin = nearest_bin(f_target, w.sample_rate, window_length);
  const auto window = hann_window(window_length);
  std::vector<cdouble> kernel(window_length);
  for (std::size_t n = 0; n < window_length; ++n) {
    // Exact integer phase index keeps the twiddles identical to the FFT's.
    const std::size_t idx = (bin * n) % window_length;
    kernel[n] = window[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(idx) /
                                                static_cast<double>(window_length));
  }
  ObservationMatrix obs;
  obs.frequency = static_cast<double>(bin) * w.sample_rate / static_cast<double>(window_length);
  obs.frame_time = frame_time(frame, window_length, hop, w.sample_rate);
  obs.x.resize(static_cast<Eigen::Index>(w.channels));
  for (std::size_t c = 0; c < w.channels; ++c) {
    const auto x = w.channel(c);
    cdouble acc = 0.0;
    for (std::size_t n = 0; n < window_length; ++n) acc += x[frame * hop + n] * kernel[n];
    obs.x(static_cast<Eigen::Index>(c)) = acc;
  }
  return obs;
}

std::size_t strongest_frame(const WaveformSet& w, std::size_t window_length, std::size_t hop,
                            double f_target) {
  check_frames(w.length, window_length, hop);
  const std::size_t frames = frame_count(w.length, window_length, hop);
  std::size_t best = 0;
  double best_energy = -1.0;
  for (std::size_t f = 0; f < frames; ++f) {
    const double e = snapshot_at(w, window_length, hop, f_target, f).x.squaredNorm();
    if (e > best_energy) {
      best_energy = e;
      best = f;
    }
  }
  return best;
}

}  // namespace hiris::spectral
