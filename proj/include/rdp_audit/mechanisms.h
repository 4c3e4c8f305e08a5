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

#ifndef RDP_AUDIT_MECHANISMS_H_
#define RDP_AUDIT_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "rdp_audit/random.h"

namespace rdp_audit {

// A database of m individuals, each holding a value in [0, 1].
class Database {
 public:
  // Throws std::invalid_argument if empty or any entry is outside [0, 1].
  explicit Database(std::vector<double> entries);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<double>& entries() const { return entries_; }

  double sum() const;
  bool is_binary() const;

  friend bool operator==(const Database&, const Database&) = default;

 private:
  std::vector<double> entries_;
};

// Two databases of equal length differing in exactly one coordinate.
struct AdjacentPair {
  AdjacentPair(Database left, Database right);

  Database left;
  Database right;
};

// x = (1, 0, ..., 0), x' = (0, ..., 0): the l1-furthest adjacent pair on the
// unit cube.
AdjacentPair default_adjacent_pair(std::size_t m);

struct LaplaceMechanism {
  double b;  // noise scale
};
struct GaussianMechanism {
  double b;  // noise standard deviation
};
// Poisson subsampling with inclusion probability gamma, then additive noise.
struct SubsampledLaplace {
  double b;
  double gamma;
};
struct SubsampledGaussian {
  double b;
  double gamma;
};
struct RandomizedResponse {
  double eps0;
};
struct ShuffledRandomizedResponse {
  double eps0;
};
// Gradient descent on l(theta, x) = (theta - x)^2 / 2 with Gaussian noise
// sqrt(2 eta) * N(0, b^2) injected at every step.
struct NoisyGradientDescent {
  double eta;
  double b;
  int iterations;
  double theta0 = 0.0;
};

using MechanismSpec =
    std::variant<LaplaceMechanism, GaussianMechanism, SubsampledLaplace,
                 SubsampledGaussian, RandomizedResponse,
                 ShuffledRandomizedResponse, NoisyGradientDescent>;

// Throws std::invalid_argument when a parameter is outside its range.
void validate(const MechanismSpec& spec);

// CLI name of the mechanism ("laplace", "sub-gaussian", "rr-shuffled", ...).
std::string mechanism_name(const MechanismSpec& spec);

bool is_discrete(const MechanismSpec& spec);

enum class SampleKind { kDiscrete, kContinuous };

// Outputs of a mechanism: either atoms of a finite alphabet {0, ..., k-1} or
// real scalars.
class SampleSet {
 public:
  static SampleSet discrete(std::vector<std::uint32_t> atoms,
                            std::size_t alphabet_size);
  static SampleSet continuous(Eigen::VectorXd values);

  SampleKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == SampleKind::kDiscrete; }
  std::size_t size() const;
  std::size_t alphabet_size() const { return alphabet_size_; }

  // Throw std::logic_error when called on the wrong kind.
  const std::vector<std::uint32_t>& atoms() const;
  const Eigen::VectorXd& values() const;

  friend bool operator==(const SampleSet& a, const SampleSet& b);

 private:
  SampleSet() = default;

  SampleKind kind_ = SampleKind::kContinuous;
  std::size_t alphabet_size_ = 0;
  std::vector<std::uint32_t> atoms_;
  Eigen::VectorXd values_;
};

// Largest database size accepted by plain randomized response; the output
// alphabet has 2^m atoms.
inline constexpr std::size_t kMaxRandomizedResponseBits = 24;

// n independent draws of the mechanism applied to db.
SampleSet sample(const MechanismSpec& spec, const Database& db, std::size_t n,
                 RandomStream& rng);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_MECHANISMS_H_
