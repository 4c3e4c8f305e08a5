//
// Copyright 2026 The RDP Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef RDP_AUDIT_DIVERGENCE_H_
#define RDP_AUDIT_DIVERGENCE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>

#include <Eigen/Core>

#include "rdp_audit/density.h"
#include "rdp_audit/kernels.h"
#include "rdp_audit/mechanisms.h"

namespace rdp_audit {

// Parameters of the smooth floor t -> log(exp(beta t) + exp(beta tau)) / beta.
struct FloorParams {
  double tau = 1e-5;   // floor level, density units
  double beta = 1e5;   // sharpness, inverse density units

  // Throws std::invalid_argument unless tau > 0 and beta > 0.
  void validate() const;
  // beta * tau < 1: the smooth floor sits noticeably above max(t, tau).
  bool loose() const { return beta * tau < 1.0; }
};

// Smooth maximum of t and tau, evaluated as
// max(t, tau) + log1p(exp(-beta |t - tau|)) / beta.
inline double softmax_floor(double t, const FloorParams& floor) {
  return std::max(t, floor.tau) +
         std::log1p(std::exp(-floor.beta * std::abs(t - floor.tau))) / floor.beta;
}

// Derivative of softmax_floor in t: the logistic function of beta (t - tau).
inline double softmax_deriv(double t, const FloorParams& floor) {
  const double z = floor.beta * (t - floor.tau);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

template <typename Derived>
auto softmax_floor(const Eigen::ArrayBase<Derived>& t, const FloorParams& floor) {
  return t.derived().unaryExpr(
      [floor](typename Derived::Scalar v) { return softmax_floor(v, floor); });
}

template <typename Derived>
auto softmax_deriv(const Eigen::ArrayBase<Derived>& t, const FloorParams& floor) {
  return t.derived().unaryExpr(
      [floor](typename Derived::Scalar v) { return softmax_deriv(v, floor); });
}

// Renyi divergence of order lambda > 1. Discrete tables are summed over the
// alphabet; grid densities are integrated by the Riemann sum on their shared
// grid. Terms with p = 0 contribute nothing; returns +inf if p > 0 somewhere
// q = 0. Throws std::invalid_argument on mismatched alphabets or grids.
double renyi_exact(const DiscreteDensityTable& p, const DiscreteDensityTable& q,
                   double lambda);
double renyi_exact(const GridDensity& p, const GridDensity& q, double lambda);

// D_lambda(p_hat, softmax_floor(q_hat)): the floored plug-in estimate.
double renyi_plugin(const DiscreteDensityTable& p_hat,
                    const DiscreteDensityTable& q_hat, double lambda,
                    const FloorParams& floor);
double renyi_plugin(const GridDensity& p_hat, const GridDensity& q_hat,
                    double lambda, const FloorParams& floor);

// Pieces of the delta-method variance estimate.
struct VarianceComponents {
  double denominator = 0.0;  // integral of p^lambda q_tau^(1 - lambda)
  double sigma1_sq = 0.0;    // before clamping
  double sigma2_sq = 0.0;    // before clamping
  double sigma_hat = 0.0;    // sqrt of the clamped variance estimate
  bool clamped = false;      // a component was negative and set to zero
};

// Throws DegenerateError when the denominator integral vanishes.
VarianceComponents variance_components(const DiscreteDensityTable& p_hat,
                                       const DiscreteDensityTable& q_hat,
                                       double lambda, const FloorParams& floor);
VarianceComponents variance_components(const GridDensity& p_hat,
                                       const GridDensity& q_hat, double lambda,
                                       const FloorParams& floor);

// sigma_hat_n, the estimated standard deviation of sqrt(n) * plug-in.
template <typename Density>
double variance_estimate(const Density& p_hat, const Density& q_hat,
                         double lambda, const FloorParams& floor) {
  return variance_components(p_hat, q_hat, lambda, floor).sigma_hat;
}

struct EstimatorConfig {
  double lambda = 2.0;
  double alpha = 0.05;
  FloorParams floor;
  BandwidthRule bandwidth;
  KernelKind kernel = KernelKind::kGaussian;
  Eigen::Index grid_size = kDefaultGridSize;

  void validate() const;
};

using Diagnostics = std::map<std::string, double>;

struct BoundResult {
  double lower_bound = 0.0;
  double plugin_divergence = 0.0;
  double sigma_hat = 0.0;
  std::size_t n = 0;
  double lambda = 0.0;
  double alpha = 0.0;
  double tau = 0.0;
  double beta = 0.0;
  Diagnostics diagnostics;

  friend bool operator==(const BoundResult&, const BoundResult&) = default;
};

// Density estimates for a pair of samples plus fitting diagnostics. Discrete
// samples become relative frequency tables; continuous samples become KDEs on
// one joint grid.
struct FittedPair {
  bool discrete = false;
  DiscreteDensityTable p_table, q_table;
  GridDensity p_grid, q_grid;
  std::size_t n = 0;
  Diagnostics diagnostics;
};

FittedPair fit_pair(const SampleSet& samples_p, const SampleSet& samples_q,
                    const EstimatorConfig& config);

// Lower bound at (lambda, alpha, floor) from already fitted densities.
BoundResult bound_from_fit(const FittedPair& fit, double lambda, double alpha,
                           const FloorParams& floor);

// plug-in + normal_quantile(alpha) * sigma_hat / sqrt(n).
BoundResult lower_bound(const SampleSet& samples_p, const SampleSet& samples_q,
                        const EstimatorConfig& config);

struct CombinedBound {
  double lower_bound;
  double confidence;  // (1 - alpha)^N
};

// Maximum over bounds from independent pairs at a common alpha.
CombinedBound combine_bounds(std::span<const BoundResult> bounds);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_DIVERGENCE_H_
