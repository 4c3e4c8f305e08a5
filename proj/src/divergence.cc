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

#include "rdp_audit/divergence.h"

#include <limits>
#include <stdexcept>
#include <string>

#include "rdp_audit/normal.h"
#include "rdp_audit/status.h"

namespace rdp_audit {
namespace {

void require_order(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("Renyi order lambda must be a finite value > 1");
  }
}

void require_same_alphabet(const DiscreteDensityTable& p,
                           const DiscreteDensityTable& q) {
  if (p.probs.size() != q.probs.size() || p.probs.size() == 0) {
    throw std::invalid_argument("densities are defined on different alphabets");
  }
}

void require_same_grid(const GridDensity& p, const GridDensity& q) {
  if (p.size() != q.size() || p.size() < 2 || p.start != q.start ||
      p.step != q.step) {
    throw std::invalid_argument("densities are evaluated on different grids");
  }
}

// (lambda - 1)^-1 log( w * sum p^lambda q^(1-lambda) ) with p = 0 terms
// dropped and +inf when p > 0 meets q = 0.
template <typename DerivedP, typename DerivedQ>
double renyi_sum(const Eigen::ArrayBase<DerivedP>& p,
                 const Eigen::ArrayBase<DerivedQ>& q, double weight,
                 double lambda) {
  require_order(lambda);
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    if (pi <= 0.0) continue;
    const double qi = q[i];
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    total += std::exp(lambda * std::log(pi) + (1.0 - lambda) * std::log(qi));
  }
  return std::log(weight * total) / (lambda - 1.0);
}

// Weighted integrals entering the variance estimate. Powers are taken in log
// space; every term carries a positive power of p, so p = 0 yields exactly
// zero. With r = (p / q_tau)^(lambda - 1) and s = pi(q) (p / q_tau)^lambda,
//   base = int p r,  int p^(2l-1) q_tau^(2-2l) - base^2 = centered_r + base^2 (1 - mass_p),
//   deriv = int q s, int pi^2 q_tau^(-2l) q p^(2l) - deriv^2 = centered_s + deriv^2 (1 - mass_q),
// where centered_r = int p (r - base)^2 and centered_s = int q (s - deriv)^2.
// The centered sums avoid the cancellation of the raw second moments.
struct PluginIntegrals {
  double base;
  double deriv;
  double centered_r;
  double centered_s;
  double mass_p;
  double mass_q;
};

PluginIntegrals plugin_integrals(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q,
                                 double weight, double lambda,
                                 const FloorParams& floor) {
  require_order(lambda);
  floor.validate();
  const Eigen::ArrayXd p_pos = p.max(0.0);
  const Eigen::ArrayXd q_pos = q.max(0.0);
  const Eigen::ArrayXd log_ratio = p_pos.log() - softmax_floor(q_pos, floor).log();
  const Eigen::ArrayXd log_pi = softmax_deriv(q_pos, floor).log();

  const Eigen::ArrayXd r = ((lambda - 1.0) * log_ratio).exp();
  const Eigen::ArrayXd s = (log_pi + lambda * log_ratio).exp();

  PluginIntegrals out;
  out.base = weight * (p_pos * r).sum();
  out.deriv = weight * (q_pos * s).sum();
  out.centered_r = weight * (p_pos * (r - out.base).square()).sum();
  out.centered_s = weight * (q_pos * (s - out.deriv).square()).sum();
  out.mass_p = weight * p_pos.sum();
  out.mass_q = weight * q_pos.sum();
  return out;
}

VarianceComponents components_from(const PluginIntegrals& in, double lambda) {
  if (!(in.base > 0.0) || !std::isfinite(in.base)) {
    throw DegenerateError("plug-in integral of p^lambda q^(1-lambda) vanishes");
  }
  VarianceComponents out;
  out.denominator = in.base;
  out.sigma1_sq = lambda * lambda * (in.centered_r + in.base * in.base * (1.0 - in.mass_p));
  out.sigma2_sq = (1.0 - lambda) * (1.0 - lambda) *
                  (in.centered_s + in.deriv * in.deriv * (1.0 - in.mass_q));
  double s1 = out.sigma1_sq, s2 = out.sigma2_sq;
  if (s1 < 0.0) {
    s1 = 0.0;
    out.clamped = true;
  }
  if (s2 < 0.0) {
    s2 = 0.0;
    out.clamped = true;
  }
  const double scale = (lambda - 1.0) * in.base;
  out.sigma_hat = std::sqrt((s1 + s2) / (scale * scale));
  return out;
}

// Fraction of p mass sitting where q falls below the floor.
double mass_below_floor(const Eigen::ArrayXd& p, const Eigen::ArrayXd& q,
                        double tau) {
  const double total = p.sum();
  if (!(total > 0.0)) return 0.0;
  return (q < tau).select(p, 0.0).sum() / total;
}

void require_matching_kinds(const SampleSet& a, const SampleSet& b) {
  if (a.kind() != b.kind()) {
    throw std::invalid_argument("samples must both be discrete or both continuous");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument("samples must have equal size n");
  }
  if (a.size() == 0) throw std::invalid_argument("samples must be nonempty");
}

}  // namespace

void FloorParams::validate() const {
  if (!(tau > 0.0) || !(beta > 0.0) || !std::isfinite(tau) || !std::isfinite(beta)) {
    throw std::invalid_argument("floor parameters tau and beta must be positive");
  }
}

double renyi_exact(const DiscreteDensityTable& p, const DiscreteDensityTable& q,
                   double lambda) {
  require_same_alphabet(p, q);
  return renyi_sum(p.probs, q.probs, 1.0, lambda);
}

double renyi_exact(const GridDensity& p, const GridDensity& q, double lambda) {
  require_same_grid(p, q);
  return renyi_sum(p.values, q.values, p.step, lambda);
}

double renyi_plugin(const DiscreteDensityTable& p_hat,
                    const DiscreteDensityTable& q_hat, double lambda,
                    const FloorParams& floor) {
  require_same_alphabet(p_hat, q_hat);
  floor.validate();
  return renyi_sum(p_hat.probs, softmax_floor(q_hat.probs.max(0.0), floor), 1.0,
                   lambda);
}

double renyi_plugin(const GridDensity& p_hat, const GridDensity& q_hat,
                    double lambda, const FloorParams& floor) {
  require_same_grid(p_hat, q_hat);
  floor.validate();
  return renyi_sum(p_hat.values, softmax_floor(q_hat.values.max(0.0), floor),
                   p_hat.step, lambda);
}

VarianceComponents variance_components(const DiscreteDensityTable& p_hat,
                                       const DiscreteDensityTable& q_hat,
                                       double lambda, const FloorParams& floor) {
  require_same_alphabet(p_hat, q_hat);
  return components_from(
      plugin_integrals(p_hat.probs, q_hat.probs, 1.0, lambda, floor), lambda);
}

VarianceComponents variance_components(const GridDensity& p_hat,
                                       const GridDensity& q_hat, double lambda,
                                       const FloorParams& floor) {
  require_same_grid(p_hat, q_hat);
  return components_from(
      plugin_integrals(p_hat.values, q_hat.values, p_hat.step, lambda, floor),
      lambda);
}

void EstimatorConfig::validate() const {
  require_order(lambda);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  floor.validate();
  if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
  if (!(bandwidth.undersmooth_exponent >= 1.0)) {
    throw std::invalid_argument("undersmooth exponent must be >= 1");
  }
}

FittedPair fit_pair(const SampleSet& samples_p, const SampleSet& samples_q,
                    const EstimatorConfig& config) {
  config.validate();
  require_matching_kinds(samples_p, samples_q);
  FittedPair fit;
  fit.n = samples_p.size();
  fit.discrete = samples_p.is_discrete();
  if (fit.discrete) {
    if (samples_p.alphabet_size() != samples_q.alphabet_size()) {
      throw std::invalid_argument("discrete samples use different alphabets");
    }
    fit.p_table = fit_rfe(samples_p);
    fit.q_table = fit_rfe(samples_q);
    fit.diagnostics["alphabet_size"] = static_cast<double>(samples_p.alphabet_size());
    return fit;
  }

  const double h_p = select_bandwidth(samples_p, config.bandwidth);
  const double h_q = select_bandwidth(samples_q, config.bandwidth);
  const GridSpec grid =
      make_joint_grid(samples_p, samples_q, std::max(h_p, h_q), config.grid_size);
  fit.p_grid = fit_kde(samples_p, config.kernel, h_p, grid);
  fit.q_grid = fit_kde(samples_q, config.kernel, h_q, grid);

  auto& d = fit.diagnostics;
  d["bandwidth_p"] = h_p;
  d["bandwidth_q"] = h_q;
  d["grid_start"] = grid.start;
  d["grid_step"] = grid.step;
  d["grid_size"] = static_cast<double>(grid.size);
  d["grid_mass_deficit_p"] = 1.0 - fit.p_grid.mass();
  d["grid_mass_deficit_q"] = 1.0 - fit.q_grid.mass();
  d["clamped_p"] = static_cast<double>(fit.p_grid.clamped);
  d["clamped_q"] = static_cast<double>(fit.q_grid.clamped);
  return fit;
}

BoundResult bound_from_fit(const FittedPair& fit, double lambda, double alpha,
                           const FloorParams& floor) {
  require_order(lambda);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  floor.validate();
  if (fit.n == 0) throw std::invalid_argument("fitted pair holds no samples");

  BoundResult result;
  result.n = fit.n;
  result.lambda = lambda;
  result.alpha = alpha;
  result.tau = floor.tau;
  result.beta = floor.beta;
  result.diagnostics = fit.diagnostics;

  VarianceComponents var;
  double below_floor;
  if (fit.discrete) {
    result.plugin_divergence = renyi_plugin(fit.p_table, fit.q_table, lambda, floor);
    var = variance_components(fit.p_table, fit.q_table, lambda, floor);
    below_floor = mass_below_floor(fit.p_table.probs, fit.q_table.probs, floor.tau);
  } else {
    result.plugin_divergence = renyi_plugin(fit.p_grid, fit.q_grid, lambda, floor);
    var = variance_components(fit.p_grid, fit.q_grid, lambda, floor);
    below_floor = mass_below_floor(fit.p_grid.values, fit.q_grid.values, floor.tau);
  }
  result.sigma_hat = var.sigma_hat;
  result.lower_bound = result.plugin_divergence +
                       normal_quantile(alpha) * var.sigma_hat /
                           std::sqrt(static_cast<double>(fit.n));

  auto& d = result.diagnostics;
  d["denominator"] = var.denominator;
  d["sigma1_sq_raw"] = var.sigma1_sq;
  d["sigma2_sq_raw"] = var.sigma2_sq;
  d["variance_clamped"] = var.clamped ? 1.0 : 0.0;
  d["floor_loose"] = floor.loose() ? 1.0 : 0.0;
  d["mass_below_floor"] = below_floor;
  d["floor_dominated"] = below_floor > 0.5 ? 1.0 : 0.0;
  return result;
}

BoundResult lower_bound(const SampleSet& samples_p, const SampleSet& samples_q,
                        const EstimatorConfig& config) {
  const FittedPair fit = fit_pair(samples_p, samples_q, config);
  return bound_from_fit(fit, config.lambda, config.alpha, config.floor);
}

CombinedBound combine_bounds(std::span<const BoundResult> bounds) {
  if (bounds.empty()) throw std::invalid_argument("no bounds to combine");
  const double alpha = bounds.front().alpha;
  double best = bounds.front().lower_bound;
  for (const BoundResult& b : bounds) {
    if (b.alpha != alpha) {
      throw std::invalid_argument("bounds must share a common alpha");
    }
    best = std::max(best, b.lower_bound);
  }
  return CombinedBound{best, std::pow(1.0 - alpha, static_cast<double>(bounds.size()))};
}

}  // namespace rdp_audit
