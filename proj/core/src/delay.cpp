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

#include "hiris/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hiris/error.hpp"
#include "hiris/fft.hpp"

namespace hiris {

BandlimitedDelay::BandlimitedDelay(std::span<const double> x, double max_shift_samples) {
  require(std::isfinite(max_shift_samples) && max_shift_samples >= 0.0,
          "maximum shift must be finite and non-negative");
  const auto pad = static_cast<std::size_t>(std::ceil(max_shift_samples)) + 1;
  spectrum_.assign(fft::good_size(x.size() + pad), {0.0, 0.0});
  std::copy(x.begin(), x.end(), spectrum_.begin());
  fft::forward(spectrum_);
}

void BandlimitedDelay::apply(double delay_samples, std::span<double> out) const {
  const std::size_t p = spectrum_.size();
  require(out.size() <= p, "delay output longer than padded signal");
  std::vector<std::complex<double>> work(p);
  const double w = -2.0 * std::numbers::pi * delay_samples / static_cast<double>(p);
  for (std::size_t k = 0; k < p; ++k) {
    if (2 * k == p) {
      // Nyquist bin: keep the shifted signal real.
      work[k] = spectrum_[k] * std::cos(std::numbers::pi * delay_samples);
      continue;
    }
    const double freq = 2 * k < p ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(p);
    work[k] = spectrum_[k] * std::polar(1.0, w * freq);
  }
  fft::inverse(work);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = work[n].real();
}

}  // namespace hiris
