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

#ifndef HIRIS_DELAY_HPP
#define HIRIS_DELAY_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hiris {

/// Band-limited fractional delay by frequency-domain phase shift. The input
/// spectrum is computed once so that many delays of the same signal are
/// cheap. The signal is zero-padded by at least max_shift samples, so shifts
/// up to that size in either direction do not wrap into the output window.
class BandlimitedDelay {
 public:
  BandlimitedDelay(std::span<const double> x, double max_shift_samples);

  /// out[n] = x(n - delay_samples) for n in [0, out.size()).
  void apply(double delay_samples, std::span<double> out) const;

  std::size_t padded_size() const { return spectrum_.size(); }

 private:
  std::vector<std::complex<double>> spectrum_;
};

}  // namespace hiris

#endif  // HIRIS_DELAY_HPP
