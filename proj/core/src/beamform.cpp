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

#include "hiris/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiris/delay.hpp"
#include "hiris/error.hpp"
#include "hiris/parallel.hpp"
#include "hiris/synth.hpp"

namespace hiris::beamform {
namespace {

constexpr Eigen::Index kDirectionBlock = 512;

void check_smoothing(const SmoothingParams& p, const ArrayGeometry& g) {
  require(p.sub_rows >= 1 && p.sub_cols >= 1, "subarray must not be empty");
  require(p.sub_rows <= g.rows() && p.sub_cols <= g.cols(), "subarray larger than the array");
  require(std::isfinite(p.loading) && p.loading >= 0.0, "diagonal loading must be >= 0");
}

// Power for a block of steering vectors (columns of `a`).
void block_power(const Eigen::MatrixXcd& snapshots, const SpatialFilterParams& params,
                 const MvdrSolver* solver, const Eigen::MatrixXcd& whitened_snapshots,
                 const Eigen::MatrixXcd& a, Eigen::Index first_direction, double* out) {
  const auto m_sub = static_cast<double>(a.rows());
  const auto l = static_cast<double>(snapshots.cols());
  if (params.kind == Kind::bartlett) {
    const Eigen::MatrixXcd y = a.adjoint() * snapshots / m_sub;
    for (Eigen::Index k = 0; k < a.cols(); ++k) out[k] = y.row(k).squaredNorm() / l;
    return;
  }
  const Eigen::MatrixXcd v = solver->whiten(a);
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double denom = v.col(k).squaredNorm();  // a^H R^-1 a
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw ProcessingError("MVDR normalisation failed at direction index " +
                            std::to_string(first_direction + k));
    }
    if (params.estimator == PowerEstimator::capon) {
      out[k] = 1.0 / denom;
    } else {
      // w^H x_l = a^H R^-1 x_l / (a^H R^-1 a)
      const Eigen::RowVectorXcd num = v.col(k).adjoint() * whitened_snapshots;
      out[k] = num.squaredNorm() / (denom * denom) / l;
    }
  }
}

}  // namespace

Eigen::MatrixXcd subarray_snapshots(const ObservationMatrix& obs, const ArrayGeometry& g,
                                    std::size_t sub_rows, std::size_t sub_cols) {
  require(static_cast<std::size_t>(obs.x.size()) == g.size(),
          "observation length does not match the array");
  const auto blocks = geometry::enumerate_subarrays(g, sub_rows, sub_cols);
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(sub_rows * sub_cols),
                     static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t l = 0; l < blocks.size(); ++l)
    for (std::size_t i = 0; i < blocks[l].size(); ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          obs.x(static_cast<Eigen::Index>(blocks[l][i]));
  return x;
}

Eigen::MatrixXcd exchange_conjugate(const Eigen::MatrixXcd& r) {
  return r.reverse().conjugate();
}

CovarianceEstimate covariance_from_snapshots(const Eigen::MatrixXcd& snapshots,
                                             bool forward_backward, double loading) {
  require(snapshots.cols() >= 1 && snapshots.rows() >= 1, "no snapshots");
  require(std::isfinite(loading) && loading >= 0.0, "diagonal loading must be >= 0");
  CovarianceEstimate est;
  est.n_forward_snapshots = static_cast<std::size_t>(snapshots.cols());
  est.loading_factor = loading;
  est.fb_applied = forward_backward;
  const auto m = snapshots.rows();
  est.matrix = snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
  if (forward_backward) {
    est.matrix = 0.5 * (est.matrix + exchange_conjugate(est.matrix));
  }
  // Force exact Hermitian symmetry before loading.
  est.matrix = 0.5 * (est.matrix + est.matrix.adjoint()).eval();
  const double trace = est.matrix.trace().real();
  est.matrix.diagonal().array() += loading * trace / static_cast<double>(m);
  return est;
}

CovarianceEstimate smoothed_covariance(const ObservationMatrix& obs, const ArrayGeometry& g,
                                       const SmoothingParams& params) {
  check_smoothing(params, g);
  return covariance_from_snapshots(subarray_snapshots(obs, g, params.sub_rows, params.sub_cols),
                                   params.forward_backward, params.loading);
}

MvdrSolver::MvdrSolver(const CovarianceEstimate& r) : llt_(r.matrix) {
  if (llt_.info() != Eigen::Success) {
    throw ProcessingError("covariance is not positive definite; increase diagonal loading");
  }
}

BeamformerWeights MvdrSolver::weights(const Eigen::VectorXcd& a) const {
  require(a.size() == llt_.rows(), "steering vector length does not match covariance");
  const Eigen::VectorXcd y = llt_.solve(a);
  const std::complex<double> c = a.dot(y);  // a^H R^-1 a
  if (!(std::abs(c) > 0.0) || !std::isfinite(std::abs(c))) {
    throw ProcessingError("MVDR normalisation a^H R^-1 a is not positive");
  }
  BeamformerWeights w;
  w.kind = Kind::mvdr;
  // Dividing by c (not |c|) keeps w^H a = 1 even when c carries a tiny
  // imaginary rounding residue.
  w.weights = y / c;
  return w;
}

Eigen::MatrixXcd MvdrSolver::whiten(const Eigen::MatrixXcd& b) const {
  return llt_.matrixL().solve(b);
}

BeamformerWeights mvdr_weights(const CovarianceEstimate& r, const Eigen::VectorXcd& a) {
  return MvdrSolver(r).weights(a);
}

BeamformerWeights bartlett_weights(const Eigen::VectorXcd& a) {
  require(a.size() > 0 && a.squaredNorm() > 0.0, "steering vector must be nonzero");
  BeamformerWeights w;
  w.kind = Kind::bartlett;
  w.weights = a / static_cast<double>(a.size());
  return w;
}

std::vector<double> spatial_spectrum(const ObservationMatrix& obs, const ArrayGeometry& g,
                                     const SpatialFilterParams& params,
                                     const ManifoldMatrix& manifold) {
  check_smoothing(params.smoothing, g);
  const auto m_sub = static_cast<Eigen::Index>(params.smoothing.sub_rows * params.smoothing.sub_cols);
  require(manifold.matrix.rows() == m_sub, "manifold does not match the subarray size");
  const Eigen::MatrixXcd snapshots =
      subarray_snapshots(obs, g, params.smoothing.sub_rows, params.smoothing.sub_cols);

  std::optional<MvdrSolver> solver;
  Eigen::MatrixXcd whitened;
  if (params.kind == Kind::mvdr) {
    solver.emplace(covariance_from_snapshots(snapshots, params.smoothing.forward_backward,
                                             params.smoothing.loading));
    whitened = solver->whiten(snapshots);
  }
  std::vector<double> power(static_cast<std::size_t>(manifold.matrix.cols()));
  const Eigen::Index n = manifold.matrix.cols();
  const auto blocks = static_cast<std::size_t>((n + kDirectionBlock - 1) / kDirectionBlock);
  parallel_for(blocks, [&](std::size_t b) {
    const Eigen::Index first = static_cast<Eigen::Index>(b) * kDirectionBlock;
    const Eigen::Index count = std::min(kDirectionBlock, n - first);
    const Eigen::MatrixXcd a = manifold.matrix.middleCols(first, count);
    block_power(snapshots, params, solver ? &*solver : nullptr, whitened, a, first,
                power.data() + first);
  });
  return power;
}

std::vector<double> spatial_spectrum(const ObservationMatrix& obs, const ArrayGeometry& g,
                                     const Medium& m, const SpatialFilterParams& params,
                                     std::span<const Direction> directions) {
  check_smoothing(params.smoothing, g);
  require(!directions.empty(), "no directions to scan");
  const ArrayGeometry sub = g.subarray(params.smoothing.sub_rows, params.smoothing.sub_cols);
  const Eigen::MatrixXcd snapshots =
      subarray_snapshots(obs, g, params.smoothing.sub_rows, params.smoothing.sub_cols);

  std::optional<MvdrSolver> solver;
  Eigen::MatrixXcd whitened;
  if (params.kind == Kind::mvdr) {
    solver.emplace(covariance_from_snapshots(snapshots, params.smoothing.forward_backward,
                                             params.smoothing.loading));
    whitened = solver->whiten(snapshots);
  }
  const auto n = static_cast<Eigen::Index>(directions.size());
  std::vector<double> power(directions.size());
  const auto blocks = static_cast<std::size_t>((n + kDirectionBlock - 1) / kDirectionBlock);
  parallel_for(blocks, [&](std::size_t b) {
    const Eigen::Index first = static_cast<Eigen::Index>(b) * kDirectionBlock;
    const Eigen::Index count = std::min(kDirectionBlock, n - first);
    const auto manifold = geometry::build_manifold(
        sub, m, obs.frequency,
        directions.subspan(static_cast<std::size_t>(first), static_cast<std::size_t>(count)));
    block_power(snapshots, params, solver ? &*solver : nullptr, whitened, manifold.matrix, first,
                power.data() + first);
  });
  return power;
}

std::vector<double> delay_and_sum(const WaveformSet& w, const ArrayGeometry& g, const Medium& m,
                                  const Direction& d) {
  require(w.channels == g.size(), "channel count does not match the array");
  geometry::validate(d);
  geometry::validate(m);
  std::vector<double> delays(g.size());
  double max_shift = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    delays[i] = synth::arrival_delay(g, m, i, d);
    max_shift = std::max(max_shift, std::abs(delays[i]) * w.sample_rate);
  }
  require(static_cast<double>(w.length) > 2.0 * max_shift,
          "signals too short to cover the steering delays");

  std::vector<std::vector<double>> aligned(g.size(), std::vector<double>(w.length));
  parallel_for(g.size(), [&](std::size_t i) {
    // Advance channel i by its arrival delay: s_i(t + tau_i).
    BandlimitedDelay line(w.channel(i), max_shift);
    line.apply(-delays[i] * w.sample_rate, aligned[i]);
  });
  std::vector<double> out(w.length, 0.0);
  for (const auto& ch : aligned)
    for (std::size_t n = 0; n < w.length; ++n) out[n] += ch[n];
  const double scale = 1.0 / static_cast<double>(g.size());
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace hiris::beamform
