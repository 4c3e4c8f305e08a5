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

#ifndef RDP_AUDIT_KERNELS_H_
#define RDP_AUDIT_KERNELS_H_

#include <string>

namespace rdp_audit {

enum class KernelKind {
  kGaussian,   // standard normal density, order 1
  kSilverman,  // exp(-|t|/sqrt(2))/2 * sin(|t|/sqrt(2) + pi/4), order 2
};

std::string kernel_name(KernelKind kind);
KernelKind parse_kernel(const std::string& name);

// Kernel function K(t).
double kernel_value(KernelKind kind, double t);

// Half-width (in bandwidth units) beyond which |K| is below ~1e-9 and is
// treated as zero by the binned estimator.
double kernel_support(KernelKind kind);

// Order of vanishing moments the kernel provides.
int kernel_order(KernelKind kind);

// Numerical moments of K over [-40, 40].
struct KernelMoments {
  double mass;    // integral of K
  double first;   // integral of t K(t)
  double second;  // integral of t^2 K(t)
  double lipschitz;  // max finite-difference slope on the test grid
};
KernelMoments kernel_moments(KernelKind kind);

// Checks unit integral, symmetry, finite Lipschitz slope and, for order-2
// kernels, a vanishing second moment. Throws std::invalid_argument on
// failure.
void check_kernel_assumptions(KernelKind kind);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_KERNELS_H_
