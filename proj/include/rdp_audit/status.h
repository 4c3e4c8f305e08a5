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

#ifndef RDP_AUDIT_STATUS_H_
#define RDP_AUDIT_STATUS_H_

#include <stdexcept>
#include <string>

namespace rdp_audit {

// Argument and precondition violations (bad parameters, malformed samples,
// mismatched supports) are reported as std::invalid_argument. The two classes
// below cover failures that depend on the data rather than on the caller.

// The sample or the fitted estimate carries too little information to
// continue, e.g. a zero-variance sample or a vanishing divergence integral.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& what)
      : std::runtime_error(what) {}
};

// A numerical routine (quadrature, root refinement) did not converge.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rdp_audit

#endif  // RDP_AUDIT_STATUS_H_
