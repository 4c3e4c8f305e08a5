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

#include "rdp_audit/density.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rdp_audit/status.h"

namespace rdp_audit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void ensure_kernel_valid(KernelKind kind) {
  static std::once_flag flags[2];
  std::call_once(flags[static_cast<int>(kind)],
                 [kind] { check_kernel_assumptions(kind); });
}

const Eigen::VectorXd& continuous_values(const SampleSet& samples) {
  if (samples.is_discrete()) {
    throw std::invalid_argument("expected a continuous sample");
  }
  return samples.values();
}

double sample_sd(const Eigen::VectorXd& x) {
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  return std::sqrt((x.array() - mean).square().sum() / (n - 1.0));
}

// Type-7 sample quantile, prob in [0, 1].
double quantile(std::vector<double>& work, double prob) {
  const double pos = prob * static_cast<double>(work.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  std::nth_element(work.begin(), work.begin() + lo, work.end());
  const double lower = work[lo];
  if (lo + 1 >= work.size()) return lower;
  const double upper = *std::min_element(work.begin() + lo + 1, work.end());
  return lower + (pos - static_cast<double>(lo)) * (upper - lower);
}

double interquartile_range(const Eigen::VectorXd& x) {
  std::vector<double> work(x.data(), x.data() + x.size());
  const double q25 = quantile(work, 0.25);
  const double q75 = quantile(work, 0.75);
  return q75 - q25;
}

// Robust normal scale: min(sd, IQR / 1.349), falling back to sd when the
// IQR vanishes.
double normal_scale(const Eigen::VectorXd& x, double iqr_divisor) {
  if (x.size() < 2) throw std::invalid_argument("bandwidth selection needs n >= 2");
  if (!x.allFinite()) throw std::invalid_argument("sample contains non-finite values");
  const double sd = sample_sd(x);
  if (!(sd > 0.0)) throw DegenerateError("sample has zero variance");
  const double iqr = interquartile_range(x) / iqr_divisor;
  return iqr > 0.0 ? std::min(sd, iqr) : sd;
}

// Linear binning of x onto `size` points start + i * step. Returns the
// per-node weights; points outside the grid are dropped.
Eigen::ArrayXd linear_bin(const Eigen::VectorXd& x, double start, double step,
                          Eigen::Index size) {
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(size);
  const double last = static_cast<double>(size - 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double pos = (x[i] - start) / step;
    if (!(pos >= 0.0) || pos > last) continue;
    const double base = std::floor(pos);
    const auto j = static_cast<Eigen::Index>(base);
    if (j >= size - 1) {
      counts[size - 1] += 1.0;
      continue;
    }
    const double frac = pos - base;
    counts[j] += 1.0 - frac;
    counts[j + 1] += frac;
  }
  return counts;
}

// Symmetric discrete convolution: out[k] = sum_l counts[k + l] * w[|l|].
Eigen::ArrayXd convolve_symmetric(const Eigen::ArrayXd& counts,
                                  const Eigen::ArrayXd& weights) {
  const Eigen::Index size = counts.size();
  const Eigen::Index taps = weights.size() - 1;
  Eigen::ArrayXd out(size);
  for (Eigen::Index k = 0; k < size; ++k) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, k - taps);
    const Eigen::Index hi = std::min<Eigen::Index>(size - 1, k + taps);
    double acc = 0.0;
    for (Eigen::Index j = lo; j <= hi; ++j) {
      acc += counts[j] * weights[std::abs(j - k)];
    }
    out[k] = acc;
  }
  return out;
}

// Binned estimate of the density functional psi_r = E[phi_g^(r)(X - X')]
// for even r, with a Gaussian kernel of bandwidth g (KernSmooth's bkfe).
double binned_functional(const Eigen::ArrayXd& counts, double delta, int order,
                         double g) {
  const Eigen::Index size = counts.size();
  const double support = 4.0 + order;
  const auto taps = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::floor(support * g / delta)), size - 1);
  Eigen::ArrayXd weights(taps + 1);
  for (Eigen::Index l = 0; l <= taps; ++l) {
    const double arg = static_cast<double>(l) * delta / g;
    // Probabilists' Hermite polynomial He_order(arg).
    double he_prev = 1.0, he = arg;
    for (int i = 2; i <= order; ++i) {
      const double next = arg * he - (i - 1) * he_prev;
      he_prev = he;
      he = next;
    }
    const double phi = std::exp(-0.5 * arg * arg) * 0.5 * std::numbers::inv_sqrtpi *
                       std::numbers::sqrt2;
    weights[l] = he * phi / std::pow(g, order + 1);
  }
  const double n = counts.sum();
  return (counts * convolve_symmetric(counts, weights)).sum() / (n * n);
}

}  // namespace

void write_csv(std::ostream& out, const GridDensity& density) {
  out << "t,value\n";
  char line[96];
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", density.point(i),
                  density.values[i]);
    out << line;
  }
}

BandwidthRule parse_bandwidth_rule(const std::string& text,
                                   double undersmooth_exponent) {
  BandwidthRule rule;
  rule.undersmooth_exponent = undersmooth_exponent;
  if (text == "rot") {
    rule.base = RuleOfThumb{};
  } else if (text == "plugin") {
    rule.base = DirectPlugIn{};
  } else if (text.rfind("fixed:", 0) == 0) {
    std::size_t used = 0;
    double h = 0.0;
    try {
      h = std::stod(text.substr(6), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 6 || !(h > 0.0)) {
      throw std::invalid_argument("fixed bandwidth must be a positive number: " + text);
    }
    rule.base = FixedBandwidth{h};
  } else {
    throw std::invalid_argument("unknown bandwidth rule: " + text);
  }
  if (!(undersmooth_exponent >= 1.0)) {
    throw std::invalid_argument("undersmooth exponent must be >= 1");
  }
  return rule;
}

std::string bandwidth_rule_name(const BandwidthRule& rule) {
  return std::visit(Overloaded{
                        [](const RuleOfThumb&) { return std::string("rot"); },
                        [](const DirectPlugIn&) { return std::string("plugin"); },
                        [](const FixedBandwidth& f) {
                          char buf[64];
                          std::snprintf(buf, sizeof(buf), "fixed:%.17g", f.h);
                          return std::string(buf);
                        },
                    },
                    rule.base);
}

DiscreteDensityTable fit_rfe(const SampleSet& samples) {
  if (!samples.is_discrete()) {
    throw std::invalid_argument("relative frequencies need a discrete sample");
  }
  const auto& atoms = samples.atoms();
  if (atoms.empty()) throw std::invalid_argument("relative frequencies need n >= 1");
  std::vector<std::size_t> counts(samples.alphabet_size(), 0);
  for (std::uint32_t a : atoms) ++counts[a];
  DiscreteDensityTable table;
  table.probs.resize(static_cast<Eigen::Index>(counts.size()));
  const double n = static_cast<double>(atoms.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    table.probs[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]) / n;
  }
  return table;
}

double rule_of_thumb_bandwidth(const Eigen::VectorXd& x) {
  const double scale = normal_scale(x, 1.34);
  return 1.06 * scale * std::pow(static_cast<double>(x.size()), -0.2);
}

double direct_plugin_bandwidth(const Eigen::VectorXd& x, Eigen::Index grid_size) {
  if (grid_size < 2) throw std::invalid_argument("plug-in grid needs >= 2 points");
  const double scale = normal_scale(x, 1.3489795003921634);
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  const double lo = (x.minCoeff() - mean) / scale;
  const double hi = (x.maxCoeff() - mean) / scale;
  const double delta = (hi - lo) / static_cast<double>(grid_size - 1);
  const Eigen::VectorXd standardized = (x.array() - mean) / scale;
  const Eigen::ArrayXd counts = linear_bin(standardized, lo, delta, grid_size);

  // Stage 1: psi_8 from the normal reference, then psi_6 and psi_4 from the
  // binned data with their AMSE-optimal pilot bandwidths.
  const double psi8 = 105.0 / (32.0 * std::sqrt(std::numbers::pi));
  const double g6 = std::pow(2.0 * std::pow(std::numbers::sqrt2, 9) / (7.0 * psi8 * n), 1.0 / 9.0);
  const double psi6 = binned_functional(counts, delta, 6, g6);
  if (!(psi6 < 0.0)) {
    throw DegenerateError("plug-in estimate of psi_6 is not negative");
  }
  const double g4 = std::pow(-3.0 * std::sqrt(2.0 / std::numbers::pi) / (psi6 * n), 1.0 / 7.0);
  const double psi4 = binned_functional(counts, delta, 4, g4);
  if (!(psi4 > 0.0)) {
    throw DegenerateError("plug-in density functional estimate is not positive");
  }
  const double del0 = 1.0 / std::pow(4.0 * std::numbers::pi, 0.1);
  return scale * del0 * std::pow(1.0 / (psi4 * n), 0.2);
}

double select_bandwidth(const SampleSet& samples, const BandwidthRule& rule) {
  const Eigen::VectorXd& x = continuous_values(samples);
  if (const auto* fixed = std::get_if<FixedBandwidth>(&rule.base)) {
    if (!(fixed->h > 0.0)) throw std::invalid_argument("fixed bandwidth must be positive");
    return fixed->h;
  }
  if (!(rule.undersmooth_exponent >= 1.0)) {
    throw std::invalid_argument("undersmooth exponent must be >= 1");
  }
  const double base = std::holds_alternative<RuleOfThumb>(rule.base)
                          ? rule_of_thumb_bandwidth(x)
                          : direct_plugin_bandwidth(x);
  return std::pow(base, rule.undersmooth_exponent);
}

GridSpec make_joint_grid(const SampleSet& a, const SampleSet& b, double h,
                         Eigen::Index grid_size) {
  const Eigen::VectorXd& xa = continuous_values(a);
  const Eigen::VectorXd& xb = continuous_values(b);
  if (xa.size() == 0 || xb.size() == 0) {
    throw std::invalid_argument("joint grid needs nonempty samples");
  }
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (grid_size < 2) throw std::invalid_argument("grid needs at least 2 points");
  const double lo = std::min(xa.minCoeff(), xb.minCoeff());
  const double hi = std::max(xa.maxCoeff(), xb.maxCoeff());
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("sample contains non-finite values");
  }
  const double start = lo - 3.0 * h;
  const double end = hi + 3.0 * h;
  return GridSpec{start, (end - start) / static_cast<double>(grid_size - 1), grid_size};
}

GridDensity fit_kde(const SampleSet& samples, KernelKind kernel, double h,
                    const GridSpec& grid) {
  const Eigen::VectorXd& x = continuous_values(samples);
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (grid.size < 2 || !(grid.step > 0.0)) {
    throw std::invalid_argument("grid needs >= 2 points and a positive step");
  }
  if (x.size() == 0) throw std::invalid_argument("KDE needs n >= 1");
  if (!x.allFinite()) throw std::invalid_argument("sample contains non-finite values");
  ensure_kernel_valid(kernel);

  const Eigen::ArrayXd counts = linear_bin(x, grid.start, grid.step, grid.size);
  const auto taps = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::floor(kernel_support(kernel) * h / grid.step)),
      grid.size - 1);
  const double norm = 1.0 / (static_cast<double>(x.size()) * h);
  Eigen::ArrayXd weights(taps + 1);
  for (Eigen::Index l = 0; l <= taps; ++l) {
    weights[l] = norm * kernel_value(kernel, static_cast<double>(l) * grid.step / h);
  }

  GridDensity density;
  density.start = grid.start;
  density.step = grid.step;
  density.values = convolve_symmetric(counts, weights);
  for (double& v : density.values) {
    if (v < 0.0) {
      v = 0.0;
      ++density.clamped;
    }
  }
  return density;
}

}  // namespace rdp_audit
