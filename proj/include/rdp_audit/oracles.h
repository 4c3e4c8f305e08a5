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

#ifndef RDP_AUDIT_ORACLES_H_
#define RDP_AUDIT_ORACLES_H_

#include <functional>
#include <vector>

#include "rdp_audit/mechanisms.h"

namespace rdp_audit {

// Closed-form Renyi parameters of the audited mechanisms on the default pair
// x = (1, 0, ..., 0), x' = 0. The statistic sensitivity and the total-loss
// gradient sensitivity are both 1 on the unit cube.

// Laplace mechanism with scale b.
double eps_laplace(double lambda, double b);

// Gaussian mechanism with standard deviation b: lambda / (2 b^2).
double eps_gaussian(double lambda, double b);

// How the base parameter enters the subsampling sum.
enum class SubsampleFormula {
  // exp((j - 1) eps0(lambda)) in every term: the base parameter at the
  // outer order. An upper bound on the order-j form for lambda > 2.
  kFixedOrder,
  // exp((j - 1) eps0(j)); the exact divergence of the default pair.
  kOrderJ,
};

// Poisson subsampling with inclusion probability gamma applied before a base
// mechanism whose Renyi parameter is base_eps(order). Requires an integer
// lambda >= 2.
double eps_subsampled(double lambda, double gamma,
                      const std::function<double(double)>& base_eps,
                      SubsampleFormula formula = SubsampleFormula::kOrderJ);

// Local randomized response with parameter eps0.
double eps_rr(double lambda, double eps0);

// Divergence of the shuffled randomized response counts on the default pair
// of size m. Requires an integer lambda >= 2.
double div_shuffled_rr(double lambda, double eps0, int m);

// j-th central moment E[(Z - m p)^j] of Z ~ Bin(m, p), by exact summation.
double binomial_central_moment(int m, double p, int j);

// Noisy gradient descent divergence for squared loss on the default pair.
double div_ngd(double lambda, double b, int m, double eta, int iterations);

// Divergence of the mechanism on the default pair of size m, dispatched to
// the matching closed form.
double oracle_divergence(const MechanismSpec& spec, double lambda, int m,
                         SubsampleFormula formula = SubsampleFormula::kOrderJ);

// A density known in closed form (as a log-density), with an interval holding
// all but a negligible fraction of its mass and the points where it is not
// smooth.
struct AnalyticDensity {
  std::function<double(double)> log_pdf;
  double lo;
  double hi;
  std::vector<double> kinks;
};

AnalyticDensity gaussian_density(double mean, double sd);
AnalyticDensity laplace_density(double location, double scale);

// Adaptive Gauss-Kronrod quadrature of int p^lambda q^(1 - lambda) over the
// union of both intervals, split at every kink. Throws NumericalFailure if
// the quadrature error estimate stays too large.
double renyi_numeric_reference(const AnalyticDensity& p, const AnalyticDensity& q,
                               double lambda);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_ORACLES_H_
