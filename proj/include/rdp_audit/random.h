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

#ifndef RDP_AUDIT_RANDOM_H_
#define RDP_AUDIT_RANDOM_H_

#include <cstdint>
#include <random>

namespace rdp_audit {

// Mixes a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Seeded random stream. All variates are produced by code in this class so
// that a (seed, substream) pair yields the same draws on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent substream derived by hashing the path (seed, a, b).
  static RandomStream derive(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via the Marsaglia polar method.
  double normal();

  // Laplace(0, b) by inversion of the CDF.
  double laplace(double b);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rdp_audit

#endif  // RDP_AUDIT_RANDOM_H_
