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

#include "rdp_audit/oracles.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rdp_audit/status.h"

namespace rdp_audit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_order(double lambda) {
  require(std::isfinite(lambda) && lambda > 1.0, "lambda must be > 1");
}

int integer_order(double lambda) {
  require(lambda >= 2.0 && lambda == std::floor(lambda) && lambda < 1e6,
          "this closed form needs an integer lambda >= 2");
  return static_cast<int>(lambda);
}

double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double eps_laplace(double lambda, double b) {
  require_order(lambda);
  require(b > 0.0, "b must be positive");
  const double w = 2.0 * lambda - 1.0;
  return std::log(lambda / w * std::exp((lambda - 1.0) / b) +
                  (lambda - 1.0) / w * std::exp(-lambda / b)) /
         (lambda - 1.0);
}

double eps_gaussian(double lambda, double b) {
  require_order(lambda);
  require(b > 0.0, "b must be positive");
  return lambda / (2.0 * b * b);
}

double eps_subsampled(double lambda, double gamma,
                      const std::function<double(double)>& base_eps,
                      SubsampleFormula formula) {
  const int order = integer_order(lambda);
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  const double keep = 1.0 - gamma;
  double total = std::pow(keep, order - 1) * (order * gamma - gamma + 1.0);
  const double eps_at_lambda = base_eps(lambda);
  for (int j = 2; j <= order; ++j) {
    const double eps =
        formula == SubsampleFormula::kFixedOrder ? eps_at_lambda : base_eps(static_cast<double>(j));
    total += binomial_coefficient(order, j) * std::pow(keep, order - j) *
             std::pow(gamma, j) * std::exp((j - 1) * eps);
  }
  return std::log(total) / (lambda - 1.0);
}

double eps_rr(double lambda, double eps0) {
  require_order(lambda);
  require(eps0 >= 0.0, "eps0 must be >= 0");
  // log p1 and log p0 for p1 = e^eps0 / (1 + e^eps0), p0 = 1 - p1.
  const double log_p0 = -eps0 - std::log1p(std::exp(-eps0));
  const double log_p1 = eps0 + log_p0;
  const double a = lambda * log_p1 + (1.0 - lambda) * log_p0;
  const double c = (1.0 - lambda) * log_p1 + lambda * log_p0;
  const double hi = std::max(a, c);
  return (hi + std::log(std::exp(a - hi) + std::exp(c - hi))) / (lambda - 1.0);
}

double binomial_central_moment(int m, double p, int j) {
  require(m >= 0, "m must be >= 0");
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  const double mean = m * p;
  double total = 0.0;
  for (int z = 0; z <= m; ++z) {
    const double pmf = binomial_coefficient(m, z) * std::pow(p, z) * std::pow(1.0 - p, m - z);
    total += pmf * std::pow(z - mean, j);
  }
  return total;
}

double div_shuffled_rr(double lambda, double eps0, int m) {
  const int order = integer_order(lambda);
  require(m >= 1, "m must be >= 1");
  require(eps0 >= 0.0, "eps0 must be >= 0");
  const double e = std::exp(eps0);
  const double flip = 1.0 / (e + 1.0);
  double total = 1.0 + binomial_coefficient(order, 2) * (e - 1.0) * (e - 1.0) / (m * e);
  const double ratio = (e * e - 1.0) / (m * e);
  for (int j = 3; j <= order; ++j) {
    total += binomial_coefficient(order, j) * std::pow(ratio, j) *
             binomial_central_moment(m, flip, j);
  }
  return std::log(total) / (lambda - 1.0);
}

double div_ngd(double lambda, double b, int m, double eta, int iterations) {
  require_order(lambda);
  require(b > 0.0, "b must be positive");
  require(m >= 1, "m must be >= 1");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  require(iterations >= 1, "iteration count must be >= 1");
  constexpr double kGradientSensitivity = 1.0;
  const double decay = std::pow(1.0 - eta, iterations);
  const double mm = static_cast<double>(m);
  return lambda * kGradientSensitivity * kGradientSensitivity / (4.0 * b * b * mm * mm) *
         (2.0 - eta) / (1.0 + decay) * (1.0 - decay);
}

double oracle_divergence(const MechanismSpec& spec, double lambda, int m,
                         SubsampleFormula formula) {
  validate(spec);
  return std::visit(
      Overloaded{
          [&](const LaplaceMechanism& s) { return eps_laplace(lambda, s.b); },
          [&](const GaussianMechanism& s) { return eps_gaussian(lambda, s.b); },
          [&](const SubsampledLaplace& s) {
            return eps_subsampled(
                lambda, s.gamma, [b = s.b](double l) { return eps_laplace(l, b); },
                formula);
          },
          [&](const SubsampledGaussian& s) {
            return eps_subsampled(
                lambda, s.gamma, [b = s.b](double l) { return eps_gaussian(l, b); },
                formula);
          },
          [&](const RandomizedResponse& s) { return eps_rr(lambda, s.eps0); },
          [&](const ShuffledRandomizedResponse& s) {
            return div_shuffled_rr(lambda, s.eps0, m);
          },
          [&](const NoisyGradientDescent& s) {
            require(s.theta0 == 0.0, "closed form assumes theta0 = 0");
            return div_ngd(lambda, s.b, m, s.eta, s.iterations);
          },
      },
      spec);
}

AnalyticDensity gaussian_density(double mean, double sd) {
  require(sd > 0.0, "sd must be positive");
  const double log_norm = -std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
  return AnalyticDensity{
      [=](double t) {
        const double z = (t - mean) / sd;
        return log_norm - 0.5 * z * z;
      },
      mean - 40.0 * sd, mean + 40.0 * sd, {}};
}

AnalyticDensity laplace_density(double location, double scale) {
  require(scale > 0.0, "scale must be positive");
  const double log_norm = -std::log(2.0 * scale);
  return AnalyticDensity{
      [=](double t) { return log_norm - std::abs(t - location) / scale; },
      location - 60.0 * scale, location + 60.0 * scale, {location}};
}

double renyi_numeric_reference(const AnalyticDensity& p, const AnalyticDensity& q,
                               double lambda) {
  require_order(lambda);
  const double lo = std::min(p.lo, q.lo);
  const double hi = std::max(p.hi, q.hi);
  std::vector<double> cuts{lo, hi};
  for (const auto* d : {&p, &q}) {
    for (double k : d->kinks) {
      if (k > lo && k < hi) cuts.push_back(k);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double t) {
    return std::exp(lambda * p.log_pdf(t) + (1.0 - lambda) * q.log_pdf(t));
  };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double error_total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double error = 0.0;
    total += Quadrature::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-14, &error);
    error_total += error;
  }
  if (!std::isfinite(total) || !(total > 0.0) || error_total > 1e-10 * total) {
    throw NumericalFailure("quadrature for the Renyi integral did not converge");
  }
  return std::log(total) / (lambda - 1.0);
}

}  // namespace rdp_audit
