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

#ifndef HIRIS_FFT_HPP
#define HIRIS_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hiris::fft {

using cdouble = std::complex<double>;

/// In-place unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
void forward(std::span<cdouble> data);

/// In-place inverse DFT including the 1/N factor.
void inverse(std::span<cdouble> data);

/// Smallest size >= n whose only prime factors are 2, 3 and 5.
std::size_t good_size(std::size_t n);

}  // namespace hiris::fft

#endif  // HIRIS_FFT_HPP
