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

#include "rdp_audit/mechanisms.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <type_traits>
#include <utility>

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

void require_positive_scale(double b) {
  require(std::isfinite(b) && b > 0.0, "noise scale b must be positive");
}

void require_inclusion_probability(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
}

void require_local_epsilon(double eps0) {
  require(std::isfinite(eps0) && eps0 >= 0.0, "eps0 must be >= 0");
}

// Sum of a Poisson subsample of db.
double subsampled_sum(const Database& db, double gamma, RandomStream& rng) {
  double total = 0.0;
  for (double x : db.entries()) {
    if (rng.bernoulli(gamma)) total += x;
  }
  return total;
}

// Probability that randomized response reports the true bit.
double keep_probability(double eps0) { return 1.0 / (1.0 + std::exp(-eps0)); }

}  // namespace

Database::Database(std::vector<double> entries) : entries_(std::move(entries)) {
  require(!entries_.empty(), "database must hold at least one entry");
  for (double e : entries_) {
    require(e >= 0.0 && e <= 1.0, "database entries must lie in [0, 1]");
  }
}

double Database::sum() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

bool Database::is_binary() const {
  for (double e : entries_) {
    if (e != 0.0 && e != 1.0) return false;
  }
  return true;
}

AdjacentPair::AdjacentPair(Database l, Database r)
    : left(std::move(l)), right(std::move(r)) {
  require(left.size() == right.size(),
          "adjacent databases must have equal length");
  std::size_t differing = 0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (left[i] != right[i]) ++differing;
  }
  require(differing == 1,
          "adjacent databases must differ in exactly one entry");
}

AdjacentPair default_adjacent_pair(std::size_t m) {
  require(m >= 1, "database size m must be >= 1");
  std::vector<double> x(m, 0.0);
  x[0] = 1.0;
  return AdjacentPair(Database(std::move(x)), Database(std::vector<double>(m, 0.0)));
}

void validate(const MechanismSpec& spec) {
  std::visit(
      Overloaded{
          [](const LaplaceMechanism& s) { require_positive_scale(s.b); },
          [](const GaussianMechanism& s) { require_positive_scale(s.b); },
          [](const SubsampledLaplace& s) {
            require_positive_scale(s.b);
            require_inclusion_probability(s.gamma);
          },
          [](const SubsampledGaussian& s) {
            require_positive_scale(s.b);
            require_inclusion_probability(s.gamma);
          },
          [](const RandomizedResponse& s) { require_local_epsilon(s.eps0); },
          [](const ShuffledRandomizedResponse& s) {
            require_local_epsilon(s.eps0);
          },
          [](const NoisyGradientDescent& s) {
            require(s.eta > 0.0 && s.eta < 1.0, "eta must lie in (0, 1)");
            require_positive_scale(s.b);
            require(s.iterations >= 1, "iteration count K must be >= 1");
            require(std::isfinite(s.theta0), "theta0 must be finite");
          },
      },
      spec);
}

std::string mechanism_name(const MechanismSpec& spec) {
  return std::visit(
      Overloaded{
          [](const LaplaceMechanism&) { return "laplace"; },
          [](const GaussianMechanism&) { return "gaussian"; },
          [](const SubsampledLaplace&) { return "sub-laplace"; },
          [](const SubsampledGaussian&) { return "sub-gaussian"; },
          [](const RandomizedResponse&) { return "rr"; },
          [](const ShuffledRandomizedResponse&) { return "rr-shuffled"; },
          [](const NoisyGradientDescent&) { return "ngd"; },
      },
      spec);
}

bool is_discrete(const MechanismSpec& spec) {
  return std::holds_alternative<RandomizedResponse>(spec) ||
         std::holds_alternative<ShuffledRandomizedResponse>(spec);
}

SampleSet SampleSet::discrete(std::vector<std::uint32_t> atoms,
                              std::size_t alphabet_size) {
  require(alphabet_size >= 1, "alphabet must hold at least one atom");
  for (std::uint32_t a : atoms) {
    require(a < alphabet_size, "atom outside the declared alphabet");
  }
  SampleSet s;
  s.kind_ = SampleKind::kDiscrete;
  s.alphabet_size_ = alphabet_size;
  s.atoms_ = std::move(atoms);
  return s;
}

SampleSet SampleSet::continuous(Eigen::VectorXd values) {
  SampleSet s;
  s.kind_ = SampleKind::kContinuous;
  s.values_ = std::move(values);
  return s;
}

std::size_t SampleSet::size() const {
  return is_discrete() ? atoms_.size() : static_cast<std::size_t>(values_.size());
}

const std::vector<std::uint32_t>& SampleSet::atoms() const {
  if (!is_discrete()) throw std::logic_error("sample set is continuous");
  return atoms_;
}

const Eigen::VectorXd& SampleSet::values() const {
  if (is_discrete()) throw std::logic_error("sample set is discrete");
  return values_;
}

bool operator==(const SampleSet& a, const SampleSet& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_discrete()) {
    return a.alphabet_size_ == b.alphabet_size_ && a.atoms_ == b.atoms_;
  }
  return a.values_.size() == b.values_.size() &&
         (a.values_.array() == b.values_.array()).all();
}

SampleSet sample(const MechanismSpec& spec, const Database& db, std::size_t n,
                 RandomStream& rng) {
  validate(spec);
  require(n >= 1, "sample count n must be >= 1");
  const std::size_t m = db.size();

  auto continuous_draws = [&](auto&& draw) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = draw();
    return SampleSet::continuous(std::move(out));
  };

  return std::visit(
      Overloaded{
          [&](const LaplaceMechanism& s) {
            const double center = db.sum();
            return continuous_draws([&] { return center + rng.laplace(s.b); });
          },
          [&](const GaussianMechanism& s) {
            const double center = db.sum();
            return continuous_draws([&] { return center + s.b * rng.normal(); });
          },
          [&](const SubsampledLaplace& s) {
            return continuous_draws([&] {
              return subsampled_sum(db, s.gamma, rng) + rng.laplace(s.b);
            });
          },
          [&](const SubsampledGaussian& s) {
            return continuous_draws([&] {
              return subsampled_sum(db, s.gamma, rng) + s.b * rng.normal();
            });
          },
          [&](const RandomizedResponse& s) {
            require(db.is_binary(), "randomized response needs a binary database");
            require(m <= kMaxRandomizedResponseBits,
                    "randomized response alphabet 2^m is too large");
            const double keep = keep_probability(s.eps0);
            std::uint32_t truth = 0;
            for (std::size_t i = 0; i < m; ++i) {
              if (db[i] == 1.0) truth |= 1u << i;
            }
            std::vector<std::uint32_t> atoms(n);
            for (auto& atom : atoms) {
              std::uint32_t flips = 0;
              for (std::size_t i = 0; i < m; ++i) {
                if (!rng.bernoulli(keep)) flips |= 1u << i;
              }
              atom = truth ^ flips;
            }
            return SampleSet::discrete(std::move(atoms), std::size_t{1} << m);
          },
          [&](const ShuffledRandomizedResponse& s) {
            require(db.is_binary(), "randomized response needs a binary database");
            const double keep = keep_probability(s.eps0);
            std::vector<std::uint32_t> atoms(n);
            for (auto& atom : atoms) {
              std::uint32_t ones = 0;
              for (std::size_t i = 0; i < m; ++i) {
                const bool bit = db[i] == 1.0;
                if (rng.bernoulli(keep) ? bit : !bit) ++ones;
              }
              atom = ones;
            }
            return SampleSet::discrete(std::move(atoms), m + 1);
          },
          [&](const NoisyGradientDescent& s) {
            const double mean = db.sum() / static_cast<double>(m);
            const double noise_scale = std::sqrt(2.0 * s.eta) * s.b;
            return continuous_draws([&] {
              double theta = s.theta0;
              for (int k = 0; k < s.iterations; ++k) {
                // (eta/m) * sum_i (theta - x_i) == eta * (theta - mean).
                theta -= s.eta * (theta - mean);
                theta += noise_scale * rng.normal();
              }
              return theta;
            });
          },
      },
      spec);
}

}  // namespace rdp_audit
