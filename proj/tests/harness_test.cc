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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "rdp_audit/cli.h"
#include "rdp_audit/oracles.h"
#include "rdp_audit/report.h"

namespace rdp_audit {
namespace {

namespace fs = std::filesystem;

ExperimentPlan small_plan(MechanismSpec mechanism, std::size_t reps = 4) {
  ExperimentPlan plan;
  plan.mechanism = mechanism;
  plan.lambdas = {2.0, 5.0};
  plan.n = 20'000;
  plan.replications = reps;
  plan.seed = 17;
  return plan;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() /
         ("rdp_audit_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
          "_" + name);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rdp-audit");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

// ---- plans and replications ----------------------------------------------

TEST(ExperimentPlanTest, Validation) {
  ExperimentPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.replications = 0;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.lambdas = {2.0, 1.0};
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.lambdas = {};
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.n = 0;
  EXPECT_THROW(plan.validate(), std::invalid_argument);
  plan = ExperimentPlan{};
  plan.mechanism = GaussianMechanism{-1.0};
  EXPECT_THROW(plan.validate(), std::invalid_argument);
}

TEST(ExperimentPlanTest, DefaultsMirrorProtocol) {
  const ExperimentPlan plan;
  EXPECT_EQ(plan.n, 5'000'000u);
  EXPECT_EQ(plan.m, 10u);
  EXPECT_EQ(plan.config.alpha, 0.05);
  EXPECT_EQ(plan.config.floor.tau, 1e-5);
  EXPECT_EQ(plan.config.floor.beta, 1e5);
  EXPECT_EQ(plan.config.grid_size, 1000);
  EXPECT_TRUE(plan.adjacent_pair().left == default_adjacent_pair(10).left);
}

TEST(RunReplicationTest, DiscretePathHasNoGridDiagnostics) {
  const ReplicationRecord r = run_replication(small_plan(RandomizedResponse{1.5}), 0);
  ASSERT_EQ(r.outcomes.size(), 2u);
  const Diagnostics& d = r.outcomes[0].bound.diagnostics;
  EXPECT_TRUE(d.contains("alphabet_size"));
  EXPECT_FALSE(d.contains("grid_start"));
  EXPECT_FALSE(d.contains("bandwidth_p"));
}

TEST(RunReplicationTest, ContinuousPathRecordsGrid) {
  const ReplicationRecord r = run_replication(small_plan(GaussianMechanism{5.0}), 0);
  EXPECT_TRUE(r.outcomes[0].bound.diagnostics.contains("grid_start"));
  EXPECT_EQ(r.outcomes[0].true_value, 0.04);
  EXPECT_EQ(r.outcomes[1].true_value, 0.1);
}

TEST(RunReplicationTest, SameSeedAndIndexGiveIdenticalRecords) {
  for (const MechanismSpec& spec :
       {MechanismSpec{LaplaceMechanism{5.0}}, MechanismSpec{ShuffledRandomizedResponse{1.5}},
        MechanismSpec{NoisyGradientDescent{0.2, 1.0, 10}}}) {
    const ExperimentPlan plan = small_plan(spec);
    const ReplicationRecord a = run_replication(plan, 3);
    const ReplicationRecord b = run_replication(plan, 3);
    const ReplicationRecord c = run_replication(plan, 4);
    for (std::size_t k = 0; k < plan.lambdas.size(); ++k) {
      EXPECT_TRUE(a.outcomes[k].bound == b.outcomes[k].bound);
      EXPECT_FALSE(a.outcomes[k].bound == c.outcomes[k].bound);
    }
  }
}

TEST(RunReplicationTest, CoverageAndRatioAreConsistent) {
  for (const MechanismSpec& spec :
       {MechanismSpec{LaplaceMechanism{5.0}}, MechanismSpec{SubsampledLaplace{5.0, 0.5}},
        MechanismSpec{RandomizedResponse{1.5}}}) {
    const ExperimentPlan plan = small_plan(spec, 6);
    for (std::size_t i = 0; i < plan.replications; ++i) {
      for (const LambdaOutcome& o : run_replication(plan, i).outcomes) {
        EXPECT_EQ(o.ratio, o.bound.lower_bound / o.true_value);
        EXPECT_EQ(o.covered, o.ratio <= 1.0);
      }
    }
  }
}

TEST(RunReplicationTest, MedianConfidenceRatioIsPluginOverTruth) {
  ExperimentPlan plan = small_plan(LaplaceMechanism{5.0}, 2);
  plan.config.alpha = 0.5;
  for (const LambdaOutcome& o : run_replication(plan, 1).outcomes) {
    EXPECT_EQ(o.ratio, o.bound.plugin_divergence / o.true_value);
  }
}

TEST(RunReplicationTest, CustomPairHasNoTrueValue) {
  ExperimentPlan plan = small_plan(LaplaceMechanism{5.0}, 1);
  plan.m = 2;
  plan.pair = AdjacentPair(Database({0.5, 0.5}), Database({0.5, 0.0}));
  const ReplicationRecord r = run_replication(plan, 0);
  EXPECT_TRUE(std::isnan(r.outcomes[0].true_value));
  EXPECT_FALSE(r.outcomes[0].covered);
  EXPECT_TRUE(std::isfinite(r.outcomes[0].bound.lower_bound));
}

// ---- summaries -----------------------------------------------------------

ReplicationRecord record_with(std::size_t index, double ratio, double seconds = 0.0) {
  ReplicationRecord r;
  r.index = index;
  LambdaOutcome o;
  o.true_value = 1.0;
  o.bound.lower_bound = ratio;
  o.ratio = ratio;
  o.covered = ratio <= 1.0;
  r.outcomes.push_back(o);
  r.seconds = seconds;
  return r;
}

TEST(SummarizeTest, SingleRecordDegeneratesToItsValues) {
  const std::vector<SummaryStats> s = summarize({record_with(0, 0.93, 2.0)}, {2.0});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].replications, 1u);
  EXPECT_EQ(s[0].alpha_hat, 0.0);
  EXPECT_EQ(s[0].ratio_min, 0.93);
  EXPECT_EQ(s[0].ratio_q25, 0.93);
  EXPECT_EQ(s[0].ratio_median, 0.93);
  EXPECT_EQ(s[0].ratio_q75, 0.93);
  EXPECT_EQ(s[0].ratio_max, 0.93);
  EXPECT_EQ(s[0].mean_seconds, 2.0);
}

TEST(SummarizeTest, QuantilesAndCoverage) {
  std::vector<ReplicationRecord> records;
  const std::vector<double> ratios = {0.9, 1.1, 0.95, 0.8, 1.0};
  for (std::size_t i = 0; i < ratios.size(); ++i) records.push_back(record_with(i, ratios[i]));
  const SummaryStats s = summarize(records, {2.0})[0];
  EXPECT_DOUBLE_EQ(s.alpha_hat, 0.2);
  EXPECT_EQ(s.ratio_min, 0.8);
  EXPECT_EQ(s.ratio_q25, 0.9);
  EXPECT_EQ(s.ratio_median, 0.95);
  EXPECT_EQ(s.ratio_q75, 1.0);
  EXPECT_EQ(s.ratio_max, 1.1);
}

TEST(SummarizeTest, InvariantsOnRandomRecords) {
  RandomStream rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ReplicationRecord> records;
    const std::size_t r = 1 + rng.next_u64() % 40;
    double covered = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      records.push_back(record_with(i, 0.8 + 0.4 * rng.uniform()));
      covered += records.back().outcomes[0].covered;
    }
    const SummaryStats s = summarize(records, {2.0})[0];
    EXPECT_EQ(s.alpha_hat, 1.0 - covered / static_cast<double>(r));
    EXPECT_GE(s.alpha_hat, 0.0);
    EXPECT_LE(s.alpha_hat, 1.0);
    EXPECT_LE(s.ratio_min, s.ratio_q25);
    EXPECT_LE(s.ratio_q25, s.ratio_median);
    EXPECT_LE(s.ratio_median, s.ratio_q75);
    EXPECT_LE(s.ratio_q75, s.ratio_max);
  }
}

TEST(SummarizeTest, NoRecords) {
  const SummaryStats s = summarize({}, {2.0})[0];
  EXPECT_EQ(s.replications, 0u);
  EXPECT_TRUE(std::isnan(s.ratio_median));
}

// ---- experiments and parallelism -----------------------------------------

TEST(RunExperimentTest, ResultsDoNotDependOnWorkerCount) {
  const ExperimentPlan plan = small_plan(SubsampledGaussian{5.0, 0.5}, 7);
  const ExperimentResult one = run_experiment(plan, 1);
  const ExperimentResult three = run_experiment(plan, 3);
  const ExperimentResult eight = run_experiment(plan, 8);
  ASSERT_EQ(one.records.size(), 7u);
  for (const ExperimentResult* other : {&three, &eight}) {
    ASSERT_EQ(other->records.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_EQ(other->records[i].index, i);
      for (std::size_t k = 0; k < plan.lambdas.size(); ++k) {
        EXPECT_TRUE(one.records[i].outcomes[k].bound == other->records[i].outcomes[k].bound);
      }
    }
    for (std::size_t k = 0; k < plan.lambdas.size(); ++k) {
      EXPECT_EQ(one.summaries[k].alpha_hat, other->summaries[k].alpha_hat);
      EXPECT_EQ(one.summaries[k].ratio_median, other->summaries[k].ratio_median);
      EXPECT_EQ(one.summaries[k].ratio_q25, other->summaries[k].ratio_q25);
    }
  }
}

TEST(RunExperimentTest, ThreadCapFromEnvironment) {
  ::setenv("RDP_AUDIT_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::setenv("RDP_AUDIT_THREADS", "junk", 1);
  EXPECT_GE(worker_count(), 1u);
  ::unsetenv("RDP_AUDIT_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(RunSweepTest, SettingsShareSamples) {
  ExperimentPlan plan = small_plan(ShuffledRandomizedResponse{1.5}, 3);
  plan.sweep = {FloorParams{1e-5, 1e5}, FloorParams{5e-6, 2e5}};
  const std::vector<SweepEntry> entries = run_sweep(plan, 1);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[1].floor.tau, 5e-6);
  ExperimentPlan direct = plan;
  direct.sweep.clear();
  direct.config.floor = FloorParams{5e-6, 2e5};
  const ExperimentResult expected = run_experiment(direct, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(entries[1].result.records[i].outcomes[0].bound ==
                expected.records[i].outcomes[0].bound);
  }
}

// ---- CSV and JSON --------------------------------------------------------

TEST(ReportTest, FormatsNumbers) {
  EXPECT_EQ(format_shortest(0.04), "0.04");
  EXPECT_EQ(format_shortest(1e-5), "1e-05");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(ReportTest, CsvRoundTripIsExact) {
  const ExperimentPlan plan = small_plan(LaplaceMechanism{5.0}, 3);
  const ExperimentResult result = run_experiment(plan, 1);
  const std::vector<CsvRow> rows = to_rows(plan, result.records);
  ASSERT_EQ(rows.size(), 6u);
  std::stringstream buffer;
  write_csv(buffer, rows);
  const std::vector<CsvRow> parsed = read_csv(buffer);
  ASSERT_EQ(parsed.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(parsed[i].rep, rows[i].rep);
    EXPECT_EQ(parsed[i].mechanism, "laplace");
    EXPECT_EQ(parsed[i].lambda, rows[i].lambda);
    EXPECT_EQ(parsed[i].n, rows[i].n);
    EXPECT_EQ(parsed[i].alpha, rows[i].alpha);
    EXPECT_EQ(parsed[i].tau, rows[i].tau);
    EXPECT_EQ(parsed[i].beta, rows[i].beta);
    EXPECT_EQ(parsed[i].lower_bound, rows[i].lower_bound);
    EXPECT_EQ(parsed[i].plugin_divergence, rows[i].plugin_divergence);
    EXPECT_EQ(parsed[i].sigma_hat, rows[i].sigma_hat);
    EXPECT_EQ(parsed[i].true_value, rows[i].true_value);
    EXPECT_EQ(parsed[i].ratio, rows[i].ratio);
    EXPECT_EQ(parsed[i].covered, rows[i].covered);
    EXPECT_EQ(parsed[i].seconds, rows[i].seconds);
  }
}

TEST(ReportTest, CsvShapes) {
  std::ostringstream empty;
  write_csv(empty, std::vector<CsvRow>{});
  EXPECT_EQ(empty.str(), std::string(kCsvHeader) + "\n");

  const ExperimentPlan plan = small_plan(GaussianMechanism{5.0}, 1);
  ExperimentPlan one_order = plan;
  one_order.lambdas = {2.0};
  const std::vector<CsvRow> rows = to_rows(one_order, {run_replication(one_order, 0)});
  EXPECT_EQ(rows.size(), 1u);
}

TEST(ReportTest, MalformedCsvIsRejected) {
  std::istringstream bad_header("rep,mechanism\n");
  EXPECT_THROW(read_csv(bad_header), std::invalid_argument);
  std::istringstream bad_row(std::string(kCsvHeader) + "\n0,laplace,2,10\n");
  EXPECT_THROW(read_csv(bad_row), std::invalid_argument);
  std::istringstream bad_number(std::string(kCsvHeader) +
                                "\n0,laplace,two,10,0.05,1e-05,100000,0,0,0,0,0,1,0\n");
  EXPECT_THROW(read_csv(bad_number), std::invalid_argument);
}

TEST(ReportTest, BoundResultJsonFields) {
  BoundResult r;
  r.lower_bound = 0.03;
  r.plugin_divergence = 0.035;
  r.sigma_hat = 1.2;
  r.n = 100;
  r.lambda = 2.0;
  r.alpha = 0.05;
  r.tau = 1e-5;
  r.beta = 1e5;
  r.diagnostics["denominator"] = 1.04;
  r.diagnostics["odd"] = std::nan("");
  const nlohmann::json j = to_json(r);
  for (const char* key : {"lower_bound", "plugin_divergence", "sigma_hat", "n", "lambda",
                          "alpha", "tau", "beta", "diagnostics"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["n"], 100);
  EXPECT_EQ(j["diagnostics"]["denominator"], 1.04);
  EXPECT_TRUE(j["diagnostics"]["odd"].is_null());
}

TEST(ReportTest, SummaryJson) {
  const ExperimentPlan plan = small_plan(RandomizedResponse{1.5}, 2);
  const ExperimentResult result = run_experiment(plan, 1);
  const nlohmann::json s = summary_json(plan, result.summaries);
  ASSERT_TRUE(s.is_array());
  ASSERT_EQ(s.size(), 2u);
  for (const char* key : {"mechanism", "lambda", "alpha_hat", "ratio_median", "ratio_q25",
                          "ratio_q75", "mean_seconds", "params"}) {
    EXPECT_TRUE(s[0].contains(key)) << key;
  }
  EXPECT_EQ(s[0]["mechanism"], "rr");
  EXPECT_EQ(s[1]["lambda"], 5.0);
  EXPECT_EQ(s[0]["params"]["eps0"], 1.5);

  const nlohmann::json empty = summary_json(plan, summarize({}, plan.lambdas));
  EXPECT_EQ(empty[0]["replications"], 0);
  EXPECT_EQ(empty[0]["empty"], true);
}

TEST(ReportTest, EmitWritesFilesAndNamesFailingPath) {
  const fs::path csv = temp_path("emit.csv");
  const fs::path json = temp_path("emit.json");
  emit({}, nlohmann::json::array(), csv.string(), json.string());
  EXPECT_EQ(read_file(csv), std::string(kCsvHeader) + "\n");
  EXPECT_EQ(nlohmann::json::parse(read_file(json)), nlohmann::json::array());
  fs::remove(csv);
  fs::remove(json);

  const std::string bad = "/nonexistent-dir/x/out.csv";
  try {
    emit({}, nlohmann::json::array(), bad, "");
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(bad), std::string::npos);
  }
}

// ---- command line --------------------------------------------------------

TEST(CliTest, OraclePrintsClosedForm) {
  const CliResult r = cli({"oracle", "--mechanism", "gaussian", "--lambda", "2", "--b", "5"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0.04\n");
  const CliResult multi = cli({"oracle", "--mechanism", "gaussian", "--lambda", "2,7"});
  EXPECT_EQ(multi.out, "2 0.04\n7 0.14\n");
  const CliResult ngd = cli({"oracle", "--mechanism", "ngd", "--lambda", "2"});
  EXPECT_EQ(ngd.out, format_shortest(div_ngd(2.0, 1.0, 10, 0.2, 10)) + "\n");
}

TEST(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(cli({"run", "--mechanism", "bogus"}).status, 2);
  EXPECT_EQ(cli({"run", "--no-such-flag"}).status, 2);
  EXPECT_EQ(cli({}).status, 2);
  EXPECT_EQ(cli({"frobnicate"}).status, 2);
  EXPECT_EQ(cli({"run", "--lambda", "0.5"}).status, 2);
  EXPECT_EQ(cli({"run", "--bandwidth", "wide"}).status, 2);
  EXPECT_EQ(cli({"sweep", "--mechanism", "rr"}).status, 2);
  EXPECT_EQ(cli({"oracle", "--mechanism", "rr-shuffled", "--lambda", "2.5"}).status, 2);
  const CliResult r = cli({"run", "--mechanism", "bogus"});
  EXPECT_NE(r.err.find("--mechanism"), std::string::npos);
}

TEST(CliTest, RuntimeErrorsExitWithOne) {
  const CliResult r = cli({"run", "--mechanism", "laplace", "--n", "1000", "--reps", "1",
                           "--out-csv", "/nonexistent-dir/out.csv"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("/nonexistent-dir/out.csv"), std::string::npos);
}

TEST(CliTest, HelpExitsWithZero) {
  const CliResult r = cli({"run", "--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("--mechanism"), std::string::npos);
}

TEST(CliTest, RunProducesIdenticalCsvBytes) {
  const fs::path a = temp_path("run_a.csv");
  const fs::path b = temp_path("run_b.csv");
  const fs::path j = temp_path("run.json");
  for (const fs::path& p : {a, b}) {
    const CliResult r = cli({"run", "--mechanism", "laplace", "--lambda", "2", "--reps", "1",
                             "--seed", "7", "--n", "100000", "--out-csv", p.string(),
                             "--out-json", j.string()});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  const std::string bytes = read_file(a);
  EXPECT_EQ(bytes, read_file(b));
  std::istringstream in(bytes);
  const std::vector<CsvRow> rows = read_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n, 100'000u);
  EXPECT_EQ(rows[0].seconds, 0.0);
  const nlohmann::json summary = nlohmann::json::parse(read_file(j));
  EXPECT_EQ(summary[0]["mechanism"], "laplace");
  for (const fs::path& p : {a, b, j}) fs::remove(p);
}

TEST(CliTest, SweepPrintsOneBlockPerFloor) {
  const fs::path csv = temp_path("sweep.csv");
  const CliResult r = cli({"sweep", "--mechanism", "rr-shuffled", "--lambda", "2",
                           "--taus", "1e-5,5e-6", "--n", "20000", "--reps", "2",
                           "--out-csv", csv.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  for (double tau : {1e-5, 5e-6}) {
    const std::string block = "mechanism=rr-shuffled tau=" + format_shortest(tau) +
                              " beta=" + format_shortest(1.0 / tau);
    EXPECT_NE(r.out.find(block), std::string::npos) << r.out;
  }
  std::ifstream in(csv);
  EXPECT_EQ(read_csv(in).size(), 4u);
  fs::remove(csv);
}

}  // namespace
}  // namespace rdp_audit
