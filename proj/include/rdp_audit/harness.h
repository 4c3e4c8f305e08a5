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

#ifndef RDP_AUDIT_HARNESS_H_
#define RDP_AUDIT_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdp_audit/divergence.h"
#include "rdp_audit/mechanisms.h"
#include "rdp_audit/oracles.h"

namespace rdp_audit {

// One audit experiment: R independent replications of sampling the mechanism
// on an adjacent pair and bounding D_lambda for every requested order.
struct ExperimentPlan {
  MechanismSpec mechanism = LaplaceMechanism{5.0};
  std::vector<double> lambdas{2.0};
  // config.lambda is ignored; the orders come from `lambdas`.
  EstimatorConfig config;
  std::size_t n = 5'000'000;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::size_t m = 10;
  // Defaults to default_adjacent_pair(m). Oracle values assume the default
  // pair; records of any other pair carry a NaN true value.
  std::optional<AdjacentPair> pair;
  SubsampleFormula subsample_formula = SubsampleFormula::kOrderJ;
  // Floor settings compared by run_sweep.
  std::vector<FloorParams> sweep;

  // Throws std::invalid_argument for an inconsistent plan.
  void validate() const;
  AdjacentPair adjacent_pair() const;
};

struct LambdaOutcome {
  BoundResult bound;
  double true_value = 0.0;
  double ratio = 0.0;    // lower_bound / true_value
  bool covered = false;  // lower_bound <= true_value
};

struct ReplicationRecord {
  std::size_t index = 0;
  std::vector<LambdaOutcome> outcomes;  // parallel to plan.lambdas
  double seconds = 0.0;
};

struct SummaryStats {
  double lambda = 0.0;
  std::size_t replications = 0;
  double alpha_hat = 0.0;  // fraction of replications not covered
  double ratio_min = 0.0;
  double ratio_q25 = 0.0;
  double ratio_median = 0.0;
  double ratio_q75 = 0.0;
  double ratio_max = 0.0;
  double mean_seconds = 0.0;
};

// Samples both databases from substreams of (seed, index) and bounds every
// order in the plan from one pair of density fits.
ReplicationRecord run_replication(const ExperimentPlan& plan, std::size_t index);

// One SummaryStats per order in `lambdas`, folded over records in index
// order.
std::vector<SummaryStats> summarize(const std::vector<ReplicationRecord>& records,
                                    const std::vector<double>& lambdas);

struct ExperimentResult {
  std::vector<ReplicationRecord> records;  // sorted by index
  std::vector<SummaryStats> summaries;
};

// Worker count from RDP_AUDIT_THREADS, else the hardware concurrency.
std::size_t worker_count();

// Runs all replications on up to `threads` workers (0 = worker_count()).
// Results do not depend on the number of workers.
ExperimentResult run_experiment(const ExperimentPlan& plan, std::size_t threads = 0);

struct SweepEntry {
  FloorParams floor;
  ExperimentResult result;
};

// Evaluates every floor in plan.sweep on the same replications: each pair of
// samples is drawn and fitted once. Entry k equals run_experiment with
// config.floor = plan.sweep[k], except for wall times.
std::vector<SweepEntry> run_sweep(const ExperimentPlan& plan, std::size_t threads = 0);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_HARNESS_H_
