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

// Command implementations behind the ccfunnel executable. Each returns the
// process exit status: 0 pass, 1 check or validation failure, 2 I/O or parse
// error. Human-readable output goes to `out`, diagnostics to `err`.

#ifndef CCFUNNEL_CLI_H_
#define CCFUNNEL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ccfunnel {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

// Simulates the scenario and writes trace.csv, report.txt, funnel_<i>.csv,
// phi_<i>.csv and (for two outputs) plane.csv into out_dir.
int cmd_run(const std::string& scenario_path,
            const std::vector<std::string>& overrides,
            const std::string& out_dir, std::ostream& out, std::ostream& err);

// Re-checks an existing trace against the scenario it came from.
int cmd_check(const std::string& trace_path, const std::string& scenario_path,
              std::ostream& out, std::ostream& err);

// Static scenario checks only.
int cmd_validate(const std::string& scenario_path,
                 const std::vector<std::string>& overrides, std::ostream& out,
                 std::ostream& err);

}  // namespace ccfunnel

#endif  // CCFUNNEL_CLI_H_
