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

#include "rdp_audit/kernels.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rdp_audit {

std::string kernel_name(KernelKind kind) {
  return kind == KernelKind::kGaussian ? "gaussian" : "silverman";
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "gaussian") return KernelKind::kGaussian;
  if (name == "silverman") return KernelKind::kSilverman;
  throw std::invalid_argument("unknown kernel: " + name);
}

double kernel_value(KernelKind kind, double t) {
  switch (kind) {
    case KernelKind::kGaussian:
      return std::exp(-0.5 * t * t) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
    case KernelKind::kSilverman: {
      const double a = std::abs(t);
      return 0.5 * std::exp(-a / std::numbers::sqrt2) *
             std::sin(a / std::numbers::sqrt2 + 0.25 * std::numbers::pi);
    }
  }
  return 0.0;
}

double kernel_support(KernelKind kind) {
  return kind == KernelKind::kGaussian ? 6.5 : 30.0;
}

int kernel_order(KernelKind kind) {
  return kind == KernelKind::kGaussian ? 1 : 2;
}

KernelMoments kernel_moments(KernelKind kind) {
  // Composite Simpson on a fine grid; the Silverman kernel has a kink at 0,
  // which is a grid node.
  const double half = std::max(40.0, kernel_support(kind));
  const int panels = 400000;
  const double h = 2.0 * half / panels;
  KernelMoments m{0.0, 0.0, 0.0, 0.0};
  double prev = kernel_value(kind, -half);
  for (int i = 0; i <= panels; ++i) {
    const double t = -half + i * h;
    const double k = kernel_value(kind, t);
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    m.mass += w * k;
    m.first += w * t * k;
    m.second += w * t * t * k;
    if (i > 0) m.lipschitz = std::max(m.lipschitz, std::abs(k - prev) / h);
    prev = k;
  }
  m.mass *= h / 3.0;
  m.first *= h / 3.0;
  m.second *= h / 3.0;
  return m;
}

void check_kernel_assumptions(KernelKind kind) {
  const KernelMoments m = kernel_moments(kind);
  if (std::abs(m.mass - 1.0) > 1e-6) {
    throw std::invalid_argument(kernel_name(kind) + " kernel does not integrate to 1");
  }
  if (std::abs(m.first) > 1e-6) {
    throw std::invalid_argument(kernel_name(kind) + " kernel is not symmetric");
  }
  if (!std::isfinite(m.lipschitz) || m.lipschitz > 10.0) {
    throw std::invalid_argument(kernel_name(kind) + " kernel is not Lipschitz on the test grid");
  }
  if (kernel_order(kind) >= 2 && std::abs(m.second) > 1e-4) {
    throw std::invalid_argument(kernel_name(kind) + " kernel second moment does not vanish");
  }
  for (double t : {0.1, 0.7, 1.9, 4.2}) {
    if (kernel_value(kind, t) != kernel_value(kind, -t)) {
      throw std::invalid_argument(kernel_name(kind) + " kernel is not even");
    }
  }
}

}  // namespace rdp_audit
