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

#ifndef RDP_AUDIT_DENSITY_H_
#define RDP_AUDIT_DENSITY_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "rdp_audit/kernels.h"
#include "rdp_audit/mechanisms.h"

namespace rdp_audit {

// Probability masses over the alphabet {0, ..., size-1}.
struct DiscreteDensityTable {
  Eigen::ArrayXd probs;

  std::size_t alphabet_size() const { return static_cast<std::size_t>(probs.size()); }
};

// Density evaluations at start + i * step, i = 0..G-1.
struct GridDensity {
  double start = 0.0;
  double step = 1.0;
  Eigen::ArrayXd values;
  // Number of grid values that were negative and set to zero (higher-order
  // kernels only).
  std::size_t clamped = 0;

  Eigen::Index size() const { return values.size(); }
  double point(Eigen::Index i) const { return start + static_cast<double>(i) * step; }
  // Riemann sum step * sum(values).
  double mass() const { return step * values.sum(); }
};

// Writes "t,value" rows with a header line.
void write_csv(std::ostream& out, const GridDensity& density);

struct RuleOfThumb {};
struct DirectPlugIn {};
struct FixedBandwidth {
  double h;
};

struct BandwidthRule {
  std::variant<RuleOfThumb, DirectPlugIn, FixedBandwidth> base = RuleOfThumb{};
  // The base bandwidth is raised to this power (ignored for fixed rules).
  double undersmooth_exponent = 1.1;
};

// Parses "rot", "plugin" or "fixed:<h>".
BandwidthRule parse_bandwidth_rule(const std::string& text,
                                   double undersmooth_exponent = 1.1);
std::string bandwidth_rule_name(const BandwidthRule& rule);

struct GridSpec {
  double start;
  double step;
  Eigen::Index size;
};

inline constexpr Eigen::Index kDefaultGridSize = 1000;

// Relative frequency estimate over the sample's declared alphabet.
DiscreteDensityTable fit_rfe(const SampleSet& samples);

// Normal-scale rule: 1.06 * min(sd, IQR / 1.34) * n^(-1/5).
double rule_of_thumb_bandwidth(const Eigen::VectorXd& x);

// Two-stage direct plug-in estimate of the AMISE-optimal Gaussian-kernel
// bandwidth (Sheather-Jones / Wand-Jones), computed from binned data.
double direct_plugin_bandwidth(const Eigen::VectorXd& x,
                               Eigen::Index grid_size = 401);

double select_bandwidth(const SampleSet& samples, const BandwidthRule& rule);

// Shared grid spanning the pooled sample range padded by 3h on each side.
GridSpec make_joint_grid(const SampleSet& a, const SampleSet& b, double h,
                         Eigen::Index grid_size = kDefaultGridSize);

// Kernel density estimate evaluated on the grid via linear binning followed
// by a discrete convolution with the kernel weights. Samples outside the grid
// are dropped but still count towards n. Negative evaluations (Silverman
// kernel) are clamped to zero and counted.
GridDensity fit_kde(const SampleSet& samples, KernelKind kernel, double h,
                    const GridSpec& grid);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_DENSITY_H_
