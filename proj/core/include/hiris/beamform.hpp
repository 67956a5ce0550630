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

#ifndef HIRIS_BEAMFORM_HPP
#define HIRIS_BEAMFORM_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hiris/geometry.hpp"
#include "hiris/signals.hpp"
#include "hiris/spectral.hpp"

namespace hiris::beamform {

using geometry::ArrayGeometry;
using geometry::Direction;
using geometry::ManifoldMatrix;
using geometry::Medium;
using spectral::ObservationMatrix;

enum class Kind { mvdr, bartlett };

/// How MVDR output power is estimated. averaged_output beamforms every
/// forward subarray snapshot and averages |w^H x_l|^2; capon evaluates
/// 1 / (a^H R^-1 a).
enum class PowerEstimator { averaged_output, capon };

struct SmoothingParams {
  std::size_t sub_rows = 28;
  std::size_t sub_cols = 28;
  bool forward_backward = true;
  double loading = 0.1;  // relative: adds loading * trace(R) / M to the diagonal
};

struct CovarianceEstimate {
  Eigen::MatrixXcd matrix;
  std::size_t n_forward_snapshots = 0;
  double loading_factor = 0.0;
  bool fb_applied = false;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Forward subarray snapshots as columns (M_sub x L), in enumerate_subarrays
/// order.
Eigen::MatrixXcd subarray_snapshots(const ObservationMatrix& obs, const ArrayGeometry& g,
                                    std::size_t sub_rows, std::size_t sub_cols);

/// J conj(R) J with J the exchange matrix.
Eigen::MatrixXcd exchange_conjugate(const Eigen::MatrixXcd& r);

/// R = (1/L) X X^H, optionally forward-backward averaged, then diagonally
/// loaded by loading * trace(R) / M.
CovarianceEstimate covariance_from_snapshots(const Eigen::MatrixXcd& snapshots,
                                             bool forward_backward, double loading);

CovarianceEstimate smoothed_covariance(const ObservationMatrix& obs, const ArrayGeometry& g,
                                       const SmoothingParams& params);

struct BeamformerWeights {
  Kind kind = Kind::bartlett;
  Eigen::VectorXcd weights;
  std::optional<Direction> direction;
  double frequency = 0.0;
};

/// Cholesky factor of a loaded covariance, shared across steering
/// directions. Throws ProcessingError when R is not positive definite.
class MvdrSolver {
 public:
  explicit MvdrSolver(const CovarianceEstimate& r);

  /// w = R^-1 a / (a^H R^-1 a).
  BeamformerWeights weights(const Eigen::VectorXcd& a) const;

  /// L^-1 B for the lower Cholesky factor L (R = L L^H).
  Eigen::MatrixXcd whiten(const Eigen::MatrixXcd& b) const;

  std::size_t size() const { return static_cast<std::size_t>(llt_.rows()); }

 private:
  Eigen::LLT<Eigen::MatrixXcd> llt_;
};

BeamformerWeights mvdr_weights(const CovarianceEstimate& r, const Eigen::VectorXcd& a);

/// w = a / M.
BeamformerWeights bartlett_weights(const Eigen::VectorXcd& a);

struct SpatialFilterParams {
  Kind kind = Kind::mvdr;
  SmoothingParams smoothing;
  PowerEstimator estimator = PowerEstimator::averaged_output;
};

/// Power per manifold column. The manifold must describe the subarray
/// geometry at the snapshot's realised frequency.
std::vector<double> spatial_spectrum(const ObservationMatrix& obs, const ArrayGeometry& g,
                                     const SpatialFilterParams& params,
                                     const ManifoldMatrix& manifold);

/// As above, building the subarray manifold at obs.frequency in blocks so
/// that large direction sets never materialise a full manifold.
std::vector<double> spatial_spectrum(const ObservationMatrix& obs, const ArrayGeometry& g,
                                     const Medium& m, const SpatialFilterParams& params,
                                     std::span<const Direction> directions);

/// Broadband time-domain beamformer: y(t) = (1/M) sum_i s_i(t + tau_i(d)),
/// tau_i the far-field arrival delay, with band-limited fractional shifts.
std::vector<double> delay_and_sum(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                                  const Direction& d);

}  // namespace hiris::beamform

#endif  // HIRIS_BEAMFORM_HPP
