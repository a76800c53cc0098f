// Copyright 2026 The ccfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCFUNNEL_FAULT_H_
#define CCFUNNEL_FAULT_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccfunnel {

enum class FaultKind {
  kValidation,
  kFunnelViolation,
  kVelocityFunnelViolation,
  kPlannerInfeasibility,
  kDomain,
  kNonFinite,
  kSingularConfiguration,
};

std::string_view fault_kind_name(FaultKind kind);
// Inverse of fault_kind_name. Throws std::invalid_argument on unknown names.
FaultKind parse_fault_kind(std::string_view name);

// A fault raised by a module during evaluation. index is the offending
// output component (0-based) or -1 when not tied to a component; time is
// NaN when the raising operation does not know the simulation time.
struct Fault {
  FaultKind kind = FaultKind::kDomain;
  double time = 0.0;
  int index = -1;
  std::string message;
};

class FaultError : public std::runtime_error {
 public:
  explicit FaultError(Fault fault);

  const Fault& fault() const { return fault_; }

 private:
  Fault fault_;
};

std::string describe(const Fault& fault);

}  // namespace ccfunnel

#endif  // CCFUNNEL_FAULT_H_
