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

#include "rdp_audit/cli.h"

#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdp_audit/harness.h"
#include "rdp_audit/oracles.h"
#include "rdp_audit/report.h"

namespace rdp_audit {
namespace {

// Thrown for values CLI11 accepted syntactically but that make no sense.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MechanismFlags {
  std::string name;
  std::optional<double> b;
  double gamma = 0.5;
  double eps0 = 1.5;
  double eta = 0.2;
  int iterations = 10;
};

struct RunFlags {
  MechanismFlags mech;
  std::vector<double> lambdas{2.0};
  std::size_t n = 5'000'000;
  double alpha = 0.05;
  double tau = 1e-5;
  double beta = 1e5;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  long grid = 1000;
  std::string bandwidth = "rot";
  double undersmooth = 1.1;
  std::string kernel = "gaussian";
  std::string subsample_formula = "order_j";
  std::size_t m = 10;
  std::size_t threads = 0;
  bool timing = false;
  std::string out_csv;
  std::string out_json;
  std::vector<double> taus;
  std::vector<double> betas;
};

const std::vector<std::string> kMechanismNames = {
    "laplace", "gaussian", "sub-laplace", "sub-gaussian", "rr", "rr-shuffled", "ngd"};

void add_mechanism_flags(CLI::App* app, MechanismFlags& f) {
  app->add_option("--mechanism", f.name, "Mechanism to audit")
      ->required()
      ->check(CLI::IsMember(kMechanismNames));
  app->add_option("--b", f.b, "Noise scale (default 5; 1 for ngd)");
  app->add_option("--gamma", f.gamma, "Subsampling inclusion probability")->capture_default_str();
  app->add_option("--eps0", f.eps0, "Local randomized response parameter")->capture_default_str();
  app->add_option("--eta", f.eta, "Noisy gradient descent learning rate")->capture_default_str();
  app->add_option("--iters", f.iterations, "Noisy gradient descent iterations")->capture_default_str();
}

MechanismSpec build_mechanism(const MechanismFlags& f) {
  const double additive_b = f.b.value_or(5.0);
  MechanismSpec spec;
  if (f.name == "laplace") {
    spec = LaplaceMechanism{additive_b};
  } else if (f.name == "gaussian") {
    spec = GaussianMechanism{additive_b};
  } else if (f.name == "sub-laplace") {
    spec = SubsampledLaplace{additive_b, f.gamma};
  } else if (f.name == "sub-gaussian") {
    spec = SubsampledGaussian{additive_b, f.gamma};
  } else if (f.name == "rr") {
    spec = RandomizedResponse{f.eps0};
  } else if (f.name == "rr-shuffled") {
    spec = ShuffledRandomizedResponse{f.eps0};
  } else {
    spec = NoisyGradientDescent{f.eta, f.b.value_or(1.0), f.iterations, 0.0};
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

SubsampleFormula parse_formula(const std::string& s) {
  if (s == "fixed_order") return SubsampleFormula::kFixedOrder;
  if (s == "order_j") return SubsampleFormula::kOrderJ;
  throw UsageError("unknown subsample formula: " + s);
}

void add_run_flags(CLI::App* app, RunFlags& f) {
  add_mechanism_flags(app, f.mech);
  app->add_option("--lambda", f.lambdas, "Renyi orders, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--n", f.n, "Samples per database")->capture_default_str();
  app->add_option("--alpha", f.alpha, "One minus the confidence level")->capture_default_str();
  app->add_option("--tau", f.tau, "Floor level")->capture_default_str();
  app->add_option("--beta", f.beta, "Softmax sharpness")->capture_default_str();
  app->add_option("--reps", f.reps, "Replications")->capture_default_str();
  app->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  app->add_option("--grid", f.grid, "KDE grid points")->capture_default_str();
  app->add_option("--bandwidth", f.bandwidth, "rot | plugin | fixed:<h>")->capture_default_str();
  app->add_option("--undersmooth", f.undersmooth, "Bandwidth exponent")->capture_default_str();
  app->add_option("--kernel", f.kernel, "gaussian | silverman")->capture_default_str();
  app->add_option("--subsample-formula", f.subsample_formula, "order_j | fixed_order")
      ->capture_default_str();
  app->add_option("--m", f.m, "Database size")->capture_default_str();
  app->add_option("--threads", f.threads, "Worker threads (0 = RDP_AUDIT_THREADS or all cores)");
  app->add_flag("--timing", f.timing, "Record wall time per replication in the outputs");
  app->add_option("--out-csv", f.out_csv, "Per-replication CSV output");
  app->add_option("--out-json", f.out_json, "Summary JSON output");
}

ExperimentPlan build_plan(const RunFlags& f) {
  ExperimentPlan plan;
  plan.mechanism = build_mechanism(f.mech);
  plan.lambdas = f.lambdas;
  plan.n = f.n;
  plan.replications = f.reps;
  plan.seed = f.seed;
  plan.m = f.m;
  plan.subsample_formula = parse_formula(f.subsample_formula);
  plan.config.alpha = f.alpha;
  plan.config.floor = FloorParams{f.tau, f.beta};
  plan.config.grid_size = f.grid;
  try {
    plan.config.bandwidth = parse_bandwidth_rule(f.bandwidth, f.undersmooth);
    plan.config.kernel = parse_kernel(f.kernel);
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return plan;
}

void strip_timing(ExperimentResult& result, const std::vector<double>& lambdas) {
  for (auto& r : result.records) r.seconds = 0.0;
  result.summaries = summarize(result.records, lambdas);
}

void print_summaries(std::ostream& out, const ExperimentPlan& plan,
                     const std::vector<SummaryStats>& stats) {
  out << "mechanism=" << mechanism_name(plan.mechanism)
      << " tau=" << format_shortest(plan.config.floor.tau)
      << " beta=" << format_shortest(plan.config.floor.beta)
      << " n=" << plan.n << " reps=" << plan.replications << '\n';
  for (const SummaryStats& s : stats) {
    out << "  lambda=" << format_shortest(s.lambda)
        << " alpha_hat=" << format_shortest(s.alpha_hat)
        << " ratio_q25=" << format_shortest(s.ratio_q25)
        << " ratio_median=" << format_shortest(s.ratio_median)
        << " ratio_q75=" << format_shortest(s.ratio_q75) << '\n';
  }
}

int run_command(const RunFlags& f, std::ostream& out) {
  const ExperimentPlan plan = build_plan(f);
  ExperimentResult result = run_experiment(plan, f.threads);
  if (!f.timing) strip_timing(result, plan.lambdas);
  print_summaries(out, plan, result.summaries);
  emit(to_rows(plan, result.records), summary_json(plan, result.summaries),
       f.out_csv, f.out_json);
  return 0;
}

int sweep_command(const RunFlags& f, std::ostream& out) {
  ExperimentPlan plan = build_plan(f);
  if (f.taus.empty()) throw UsageError("sweep needs --taus");
  if (!f.betas.empty() && f.betas.size() != f.taus.size()) {
    throw UsageError("--betas must match --taus in length");
  }
  for (std::size_t i = 0; i < f.taus.size(); ++i) {
    const double tau = f.taus[i];
    const double beta = f.betas.empty() ? 1.0 / tau : f.betas[i];
    plan.sweep.push_back(FloorParams{tau, beta});
  }
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<SweepEntry> entries = run_sweep(plan, f.threads);
  std::vector<CsvRow> rows;
  nlohmann::json summary = nlohmann::json::array();
  for (SweepEntry& entry : entries) {
    ExperimentPlan variant = plan;
    variant.config.floor = entry.floor;
    if (!f.timing) strip_timing(entry.result, plan.lambdas);
    print_summaries(out, variant, entry.result.summaries);
    for (CsvRow& row : to_rows(variant, entry.result.records)) rows.push_back(std::move(row));
    for (auto& item : summary_json(variant, entry.result.summaries)) summary.push_back(item);
  }
  emit(rows, summary, f.out_csv, f.out_json);
  return 0;
}

int oracle_command(const MechanismFlags& mech, const std::vector<double>& lambdas,
                   std::size_t m, const std::string& formula, std::ostream& out) {
  const MechanismSpec spec = build_mechanism(mech);
  const SubsampleFormula f = parse_formula(formula);
  for (double lambda : lambdas) {
    double value;
    try {
      value = oracle_divergence(spec, lambda, static_cast<int>(m), f);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (lambdas.size() == 1) {
      out << format_shortest(value) << '\n';
    } else {
      out << format_shortest(lambda) << ' ' << format_shortest(value) << '\n';
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistical lower bounds on Renyi differential privacy"};
  app.name("rdp-audit");
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Audit a mechanism over R replications");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Repeat run over (tau, beta) pairs");
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--taus", sweep_flags.taus, "Floor levels, comma separated")
      ->delimiter(',')
      ->required();
  sweep->add_option("--betas", sweep_flags.betas, "Softmax sharpness per tau (default 1/tau)")
      ->delimiter(',');

  MechanismFlags oracle_flags;
  std::vector<double> oracle_lambdas{2.0};
  std::size_t oracle_m = 10;
  std::string oracle_formula = "order_j";
  CLI::App* oracle = app.add_subcommand("oracle", "Print the closed-form divergence");
  add_mechanism_flags(oracle, oracle_flags);
  oracle->add_option("--lambda", oracle_lambdas, "Renyi orders")->delimiter(',');
  oracle->add_option("--m", oracle_m, "Database size");
  oracle->add_option("--subsample-formula", oracle_formula, "order_j | fixed_order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(run_flags, out);
    if (sweep->parsed()) return sweep_command(sweep_flags, out);
    return oracle_command(oracle_flags, oracle_lambdas, oracle_m, oracle_formula, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rdp_audit
