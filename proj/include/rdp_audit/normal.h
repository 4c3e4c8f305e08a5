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

#ifndef RDP_AUDIT_NORMAL_H_
#define RDP_AUDIT_NORMAL_H_

namespace rdp_audit {

// Standard normal density and distribution function.
double normal_pdf(double x);
double normal_cdf(double x);

// Standard normal quantile, absolute error below 1e-9 on (0, 1).
// Wichura's AS241 rational approximation followed by one Newton step against
// the erfc-based CDF. Throws std::invalid_argument outside (0, 1).
double normal_quantile(double p);

}  // namespace rdp_audit

#endif  // RDP_AUDIT_NORMAL_H_
