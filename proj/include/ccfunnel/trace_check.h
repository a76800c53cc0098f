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

#ifndef CCFUNNEL_TRACE_CHECK_H_
#define CCFUNNEL_TRACE_CHECK_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccfunnel/engine.h"
#include "ccfunnel/planner.h"

namespace ccfunnel {

// Below this, a modification signal counts as inactive.
inline constexpr double kInactivePhi = 1e-9;

struct RecoveryCheckOptions {
  double gap_margin = 0.05;    // require eta > mu + gap_margin
  double min_duration = 0.5;   // seconds
  double rate_tolerance = 0.1;  // relative
};

struct CheckResult {
  std::string name;
  bool passed = true;
  // Worst-case value of the checked quantity (its meaning depends on the
  // check; for margins, positive means satisfied).
  double margin = 0.0;
  std::optional<std::size_t> row;
  double time = 0.0;
  int output = -1;
  std::string detail;
};

struct RecoveryFit {
  int output = 0;
  bool upper = false;
  double t_begin = 0.0;
  double t_end = 0.0;
  double rate = 0.0;
};

struct CheckReport {
  std::vector<CheckResult> checks;
  std::vector<RecoveryFit> recovery_fits;

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
  std::string to_text() const;
};

// Evaluates the closed-loop invariants over a recorded trace. Never throws
// on bad data; failures are reported.
CheckReport check_trace(const SimTrace& trace, const PlannerConfig& planner,
                        const RecoveryCheckOptions& recovery = {});

// Decay-rate fits of the modification signals on maximal intervals where the
// matching gap exceeds mu + gap_margin for at least min_duration, and the
// signal is positive throughout.
std::vector<RecoveryFit> fit_recovery_rates(
    const SimTrace& trace, const PlannerConfig& planner,
    const RecoveryCheckOptions& options = {});

}  // namespace ccfunnel

#endif  // CCFUNNEL_TRACE_CHECK_H_
