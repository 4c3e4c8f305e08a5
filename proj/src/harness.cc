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

#include "rdp_audit/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace rdp_audit {
namespace {

double quantile_sorted(const std::vector<double>& sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void ExperimentPlan::validate() const {
  ::rdp_audit::validate(mechanism);
  if (lambdas.empty()) throw std::invalid_argument("plan needs at least one lambda");
  for (double l : lambdas) {
    if (!(l > 1.0) || !std::isfinite(l)) {
      throw std::invalid_argument("every lambda must be > 1");
    }
  }
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (n < 2) throw std::invalid_argument("sample size n must be >= 2");
  if (m < 1) throw std::invalid_argument("database size m must be >= 1");
  EstimatorConfig probe = config;
  probe.lambda = lambdas.front();
  probe.validate();
  for (const FloorParams& f : sweep) f.validate();
  if (pair && pair->left.size() != m) {
    throw std::invalid_argument("adjacent pair size does not match m");
  }
}

AdjacentPair ExperimentPlan::adjacent_pair() const {
  return pair ? *pair : default_adjacent_pair(m);
}

namespace {

using Clock = std::chrono::steady_clock;

// Samples and fits replication `index` once, then evaluates every order for
// each floor setting. Each record's time covers the shared sampling and
// fitting plus its own bound evaluations.
std::vector<ReplicationRecord> replicate(const ExperimentPlan& plan, std::size_t index,
                                         const std::vector<FloorParams>& floors) {
  const auto started = Clock::now();
  const AdjacentPair dbs = plan.adjacent_pair();
  const AdjacentPair reference = default_adjacent_pair(plan.m);
  const bool default_pair = dbs.left == reference.left && dbs.right == reference.right;

  RandomStream rng_p = RandomStream::derive(plan.seed, index, 0);
  RandomStream rng_q = RandomStream::derive(plan.seed, index, 1);
  const SampleSet samples_p = sample(plan.mechanism, dbs.left, plan.n, rng_p);
  const SampleSet samples_q = sample(plan.mechanism, dbs.right, plan.n, rng_q);
  const FittedPair fit = fit_pair(samples_p, samples_q, plan.config);
  const double fit_seconds = std::chrono::duration<double>(Clock::now() - started).count();

  std::vector<ReplicationRecord> records;
  for (const FloorParams& floor : floors) {
    const auto bound_started = Clock::now();
    ReplicationRecord record;
    record.index = index;
    for (double lambda : plan.lambdas) {
      LambdaOutcome out;
      out.bound = bound_from_fit(fit, lambda, plan.config.alpha, floor);
      out.true_value = default_pair
                           ? oracle_divergence(plan.mechanism, lambda,
                                               static_cast<int>(plan.m),
                                               plan.subsample_formula)
                           : std::numeric_limits<double>::quiet_NaN();
      out.ratio = out.bound.lower_bound / out.true_value;
      out.covered = out.ratio <= 1.0;
      record.outcomes.push_back(std::move(out));
    }
    record.seconds =
        fit_seconds + std::chrono::duration<double>(Clock::now() - bound_started).count();
    records.push_back(std::move(record));
  }
  return records;
}

// Calls body(i) for i in [0, total) on up to `workers` threads. The first
// exception stops the loop and is rethrown.
template <typename Body>
void parallel_for(std::size_t total, std::size_t workers, Body body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t resolve_workers(std::size_t total, std::size_t threads) {
  return std::max<std::size_t>(1, std::min(total, threads == 0 ? worker_count() : threads));
}

}  // namespace

ReplicationRecord run_replication(const ExperimentPlan& plan, std::size_t index) {
  plan.validate();
  return replicate(plan, index, {plan.config.floor}).front();
}

std::vector<SummaryStats> summarize(const std::vector<ReplicationRecord>& records,
                                    const std::vector<double>& lambdas) {
  std::vector<SummaryStats> stats;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    SummaryStats s;
    s.lambda = lambdas[k];
    s.replications = records.size();
    if (records.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      s.alpha_hat = s.ratio_min = s.ratio_q25 = s.ratio_median = s.ratio_q75 =
          s.ratio_max = s.mean_seconds = nan;
      stats.push_back(s);
      continue;
    }
    std::vector<double> ratios;
    std::size_t covered = 0;
    double seconds = 0.0;
    for (const ReplicationRecord& r : records) {
      const LambdaOutcome& o = r.outcomes.at(k);
      ratios.push_back(o.ratio);
      if (o.covered) ++covered;
      seconds += r.seconds;
    }
    std::sort(ratios.begin(), ratios.end());
    const double count = static_cast<double>(records.size());
    s.alpha_hat = 1.0 - static_cast<double>(covered) / count;
    s.ratio_min = ratios.front();
    s.ratio_max = ratios.back();
    s.ratio_q25 = quantile_sorted(ratios, 0.25);
    s.ratio_median = quantile_sorted(ratios, 0.5);
    s.ratio_q75 = quantile_sorted(ratios, 0.75);
    s.mean_seconds = seconds / count;
    stats.push_back(s);
  }
  return stats;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("RDP_AUDIT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentPlan& plan, std::size_t threads) {
  plan.validate();
  ExperimentResult result;
  result.records.resize(plan.replications);
  parallel_for(plan.replications, resolve_workers(plan.replications, threads),
               [&](std::size_t i) {
                 result.records[i] = replicate(plan, i, {plan.config.floor}).front();
               });
  result.summaries = summarize(result.records, plan.lambdas);
  return result;
}

std::vector<SweepEntry> run_sweep(const ExperimentPlan& plan, std::size_t threads) {
  plan.validate();
  if (plan.sweep.empty()) throw std::invalid_argument("sweep needs at least one (tau, beta) pair");
  std::vector<SweepEntry> entries;
  for (const FloorParams& floor : plan.sweep) {
    entries.push_back(SweepEntry{floor, {}});
    entries.back().result.records.resize(plan.replications);
  }
  parallel_for(plan.replications, resolve_workers(plan.replications, threads),
               [&](std::size_t i) {
                 std::vector<ReplicationRecord> records = replicate(plan, i, plan.sweep);
                 for (std::size_t k = 0; k < entries.size(); ++k) {
                   entries[k].result.records[i] = std::move(records[k]);
                 }
               });
  for (SweepEntry& entry : entries) {
    entry.result.summaries = summarize(entry.result.records, plan.lambdas);
  }
  return entries;
}

}  // namespace rdp_audit
