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

#ifndef RDP_AUDIT_REPORT_H_
#define RDP_AUDIT_REPORT_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdp_audit/divergence.h"
#include "rdp_audit/harness.h"

namespace rdp_audit {

// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double v);

// Shortest representation that parses back to the same double.
std::string format_shortest(double v);

nlohmann::json to_json(const BoundResult& result);

// One CSV data row.
struct CsvRow {
  std::size_t rep = 0;
  std::string mechanism;
  double lambda = 0.0;
  std::size_t n = 0;
  double alpha = 0.0;
  double tau = 0.0;
  double beta = 0.0;
  double lower_bound = 0.0;
  double plugin_divergence = 0.0;
  double sigma_hat = 0.0;
  double true_value = 0.0;
  double ratio = 0.0;
  bool covered = false;
  double seconds = 0.0;
};

inline constexpr const char* kCsvHeader =
    "rep,mechanism,lambda,n,alpha,tau,beta,lower_bound,plugin_divergence,"
    "sigma_hat,true_value,ratio,covered,seconds";

std::vector<CsvRow> to_rows(const ExperimentPlan& plan,
                            const std::vector<ReplicationRecord>& records);

// Header plus one row per record and order.
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

// Parses what write_csv produced. Throws std::invalid_argument on malformed
// input.
std::vector<CsvRow> read_csv(std::istream& in);

// One object per order with the summary statistics and the plan parameters.
nlohmann::json summary_json(const ExperimentPlan& plan,
                            const std::vector<SummaryStats>& stats);

// Writes the CSV and/or JSON file (empty path = skip). Throws
// std::runtime_error naming the path on I/O failure.
void emit(const std::vector<CsvRow>& rows, const nlohmann::json& summary,
          const std::string& csv_path, const std::string& json_path);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_REPORT_H_
