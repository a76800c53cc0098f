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

#include "ccfunnel/cli.h"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "ccfunnel/config_text.h"
#include "ccfunnel/scenario.h"
#include "ccfunnel/trace_io.h"

namespace ccfunnel {
namespace {

namespace fs = std::filesystem;

std::optional<Scenario> load(const std::string& path,
                             const std::vector<std::string>& overrides,
                             std::ostream& err) {
  try {
    return load_scenario(path, overrides);
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

bool report_issues(const Scenario& s, const std::string& path,
                   std::ostream& err) {
  const auto issues = validate_scenario(s);
  for (const auto& issue : issues) {
    err << path << ": " << describe(issue) << "\n";
  }
  return issues.empty();
}

template <class Fn>
bool write_file(const fs::path& path, std::ostream& err, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (os) fn(os);
  if (!os) {
    err << "cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

std::string report_text(const Scenario& s, const SimTrace& trace,
                        const CheckReport& report) {
  std::ostringstream os;
  os << "scenario " << s.name << "\n";
  os << "rows " << trace.rows.size() << "\n";
  for (const auto& f : trace.faults) os << "fault " << describe(f) << "\n";
  os << report.to_text();
  return os.str();
}

}  // namespace

int cmd_run(const std::string& scenario_path,
            const std::vector<std::string>& overrides,
            const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto s = load(scenario_path, overrides, err);
  if (!s) return kExitError;
  if (!report_issues(*s, scenario_path, err)) return kExitFail;

  const SimTrace trace = simulate(*s);
  const CheckReport report = check_trace(trace, *s);
  const std::string text = report_text(*s, trace, report);

  std::error_code ec;
  const fs::path dir(out_dir);
  fs::create_directories(dir, ec);
  if (ec) {
    err << "cannot create " << out_dir << ": " << ec.message() << "\n";
    return kExitError;
  }
  bool ok = write_file(dir / "trace.csv", err,
                       [&](std::ostream& os) { write_trace_csv(os, trace); });
  ok = ok && write_file(dir / "report.txt", err,
                        [&](std::ostream& os) { os << text; });
  for (int i = 0; ok && i < trace.outputs; ++i) {
    const std::string suffix = std::to_string(i + 1) + ".csv";
    ok = write_file(dir / ("funnel_" + suffix), err, [&](std::ostream& os) {
      write_funnel_csv(os, trace, i);
    });
    ok = ok && write_file(dir / ("phi_" + suffix), err, [&](std::ostream& os) {
           write_phi_csv(os, trace, i);
         });
  }
  if (ok && trace.outputs == 2) {
    ok = write_file(dir / "plane.csv", err,
                    [&](std::ostream& os) { write_plane_csv(os, trace); });
  }
  if (!ok) return kExitError;

  out << text;
  for (const auto& f : trace.faults) err << "fault: " << describe(f) << "\n";
  return trace.ok() && report.passed() ? kExitPass : kExitFail;
}

int cmd_check(const std::string& trace_path, const std::string& scenario_path,
              std::ostream& out, std::ostream& err) {
  const auto s = load(scenario_path, {}, err);
  if (!s) return kExitError;
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) {
    err << "cannot open " << trace_path << "\n";
    return kExitError;
  }
  SimTrace trace;
  try {
    trace = read_trace_csv(in, s->outputs);
  } catch (const TraceFormatError& e) {
    err << trace_path << ": " << e.what() << "\n";
    return kExitError;
  }
  const CheckReport report = check_trace(trace, *s);
  out << report_text(*s, trace, report);
  return report.passed() ? kExitPass : kExitFail;
}

int cmd_validate(const std::string& scenario_path,
                 const std::vector<std::string>& overrides, std::ostream& out,
                 std::ostream& err) {
  const auto s = load(scenario_path, overrides, err);
  if (!s) return kExitError;
  if (!report_issues(*s, scenario_path, err)) return kExitFail;
  out << scenario_path << ": ok\n";
  return kExitPass;
}

}  // namespace ccfunnel
