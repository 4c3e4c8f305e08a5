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

#include "rdp_audit/report.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rdp_audit/density.h"
#include "rdp_audit/kernels.h"
#include "rdp_audit/mechanisms.h"

namespace rdp_audit {
namespace {

// JSON has no NaN/inf; they become null.
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double parse_double(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed number in CSV: '" + field + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& field) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed integer in CSV: '" + field + "'");
  }
  return v;
}

nlohmann::json mechanism_params(const MechanismSpec& spec) {
  nlohmann::json p;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LaplaceMechanism> ||
                      std::is_same_v<T, GaussianMechanism>) {
          p["b"] = s.b;
        } else if constexpr (std::is_same_v<T, SubsampledLaplace> ||
                             std::is_same_v<T, SubsampledGaussian>) {
          p["b"] = s.b;
          p["gamma"] = s.gamma;
        } else if constexpr (std::is_same_v<T, NoisyGradientDescent>) {
          p["eta"] = s.eta;
          p["b"] = s.b;
          p["iterations"] = s.iterations;
          p["theta0"] = s.theta0;
        } else {
          p["eps0"] = s.eps0;
        }
      },
      spec);
  return p;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const BoundResult& r) {
  nlohmann::json diagnostics = nlohmann::json::object();
  for (const auto& [key, value] : r.diagnostics) diagnostics[key] = number_or_null(value);
  return nlohmann::json{
      {"lower_bound", number_or_null(r.lower_bound)},
      {"plugin_divergence", number_or_null(r.plugin_divergence)},
      {"sigma_hat", number_or_null(r.sigma_hat)},
      {"n", r.n},
      {"lambda", r.lambda},
      {"alpha", r.alpha},
      {"tau", r.tau},
      {"beta", r.beta},
      {"diagnostics", diagnostics},
  };
}

std::vector<CsvRow> to_rows(const ExperimentPlan& plan,
                            const std::vector<ReplicationRecord>& records) {
  std::vector<CsvRow> rows;
  const std::string name = mechanism_name(plan.mechanism);
  for (const ReplicationRecord& rec : records) {
    for (const LambdaOutcome& o : rec.outcomes) {
      CsvRow row;
      row.rep = rec.index;
      row.mechanism = name;
      row.lambda = o.bound.lambda;
      row.n = o.bound.n;
      row.alpha = o.bound.alpha;
      row.tau = o.bound.tau;
      row.beta = o.bound.beta;
      row.lower_bound = o.bound.lower_bound;
      row.plugin_divergence = o.bound.plugin_divergence;
      row.sigma_hat = o.bound.sigma_hat;
      row.true_value = o.true_value;
      row.ratio = o.ratio;
      row.covered = o.covered;
      row.seconds = rec.seconds;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  for (const CsvRow& r : rows) {
    out << r.rep << ',' << r.mechanism << ',' << format_double(r.lambda) << ','
        << r.n << ',' << format_double(r.alpha) << ',' << format_double(r.tau)
        << ',' << format_double(r.beta) << ',' << format_double(r.lower_bound)
        << ',' << format_double(r.plugin_divergence) << ','
        << format_double(r.sigma_hat) << ',' << format_double(r.true_value)
        << ',' << format_double(r.ratio) << ',' << (r.covered ? 1 : 0) << ','
        << format_double(r.seconds) << '\n';
  }
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("CSV header does not match");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 14) throw std::invalid_argument("CSV row has wrong field count");
    CsvRow r;
    r.rep = parse_count(f[0]);
    r.mechanism = f[1];
    r.lambda = parse_double(f[2]);
    r.n = parse_count(f[3]);
    r.alpha = parse_double(f[4]);
    r.tau = parse_double(f[5]);
    r.beta = parse_double(f[6]);
    r.lower_bound = parse_double(f[7]);
    r.plugin_divergence = parse_double(f[8]);
    r.sigma_hat = parse_double(f[9]);
    r.true_value = parse_double(f[10]);
    r.ratio = parse_double(f[11]);
    if (f[12] != "0" && f[12] != "1") throw std::invalid_argument("covered must be 0 or 1");
    r.covered = f[12] == "1";
    r.seconds = parse_double(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json summary_json(const ExperimentPlan& plan,
                            const std::vector<SummaryStats>& stats) {
  nlohmann::json params = mechanism_params(plan.mechanism);
  params["n"] = plan.n;
  params["m"] = plan.m;
  params["alpha"] = plan.config.alpha;
  params["tau"] = plan.config.floor.tau;
  params["beta"] = plan.config.floor.beta;
  params["grid"] = plan.config.grid_size;
  params["bandwidth"] = bandwidth_rule_name(plan.config.bandwidth);
  params["undersmooth"] = plan.config.bandwidth.undersmooth_exponent;
  params["kernel"] = kernel_name(plan.config.kernel);
  params["seed"] = plan.seed;
  params["subsample_formula"] =
      plan.subsample_formula == SubsampleFormula::kFixedOrder ? "fixed_order" : "order_j";

  nlohmann::json out = nlohmann::json::array();
  for (const SummaryStats& s : stats) {
    nlohmann::json entry{
        {"mechanism", mechanism_name(plan.mechanism)},
        {"lambda", s.lambda},
        {"replications", s.replications},
        {"alpha_hat", number_or_null(s.alpha_hat)},
        {"ratio_median", number_or_null(s.ratio_median)},
        {"ratio_q25", number_or_null(s.ratio_q25)},
        {"ratio_q75", number_or_null(s.ratio_q75)},
        {"ratio_min", number_or_null(s.ratio_min)},
        {"ratio_max", number_or_null(s.ratio_max)},
        {"mean_seconds", number_or_null(s.mean_seconds)},
        {"params", params},
    };
    if (s.replications == 0) entry["empty"] = true;
    out.push_back(std::move(entry));
  }
  return out;
}

void emit(const std::vector<CsvRow>& rows, const nlohmann::json& summary,
          const std::string& csv_path, const std::string& json_path) {
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
    write_csv(out, rows);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + csv_path);
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + json_path + " for writing");
    out << summary.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + json_path);
  }
}

}  // namespace rdp_audit
