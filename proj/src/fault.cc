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

#include "ccfunnel/fault.h"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace ccfunnel {
namespace {

constexpr std::array<std::pair<FaultKind, std::string_view>, 7> kNames = {{
    {FaultKind::kValidation, "validation"},
    {FaultKind::kFunnelViolation, "funnel-violation"},
    {FaultKind::kVelocityFunnelViolation, "velocity-funnel-violation"},
    {FaultKind::kPlannerInfeasibility, "planner-infeasibility"},
    {FaultKind::kDomain, "domain"},
    {FaultKind::kNonFinite, "non-finite"},
    {FaultKind::kSingularConfiguration, "singular-configuration"},
}};

}  // namespace

std::string_view fault_kind_name(FaultKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

FaultKind parse_fault_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown fault kind: " + std::string(name));
}

FaultError::FaultError(Fault fault)
    : std::runtime_error(describe(fault)), fault_(std::move(fault)) {}

std::string describe(const Fault& fault) {
  std::ostringstream os;
  os << fault_kind_name(fault.kind);
  if (!std::isnan(fault.time)) os << " at t=" << fault.time;
  if (fault.index >= 0) os << " (output " << fault.index + 1 << ")";
  if (!fault.message.empty()) os << ": " << fault.message;
  return os.str();
}

}  // namespace ccfunnel
