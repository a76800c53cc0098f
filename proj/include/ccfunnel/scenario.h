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

// Scenario files: a declarative description of one closed-loop run.
//
// Sections: name, outputs, constraints (output_1 ... output_n), planner,
// controller (with velocity_envelope), plant (mobile_robot or point_mass),
// initial, sim. See scenarios/paper_kc3.scn for a complete example.

#ifndef CCFUNNEL_SCENARIO_H_
#define CCFUNNEL_SCENARIO_H_

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ccfunnel/config_text.h"
#include "ccfunnel/engine.h"
#include "ccfunnel/plant.h"
#include "ccfunnel/signal.h"
#include "ccfunnel/trace_check.h"

namespace ccfunnel {

// Velocity-error envelopes gamma_v_i(t) = (rho0 - rho_inf) e^{-rate t} +
// rho_inf. Without an explicit rho0 the loader uses
// rho0_scale * max(|e_v_i(0)|, rho_inf).
struct VelocityEnvelopeSpec {
  std::vector<double> rho_inf;
  std::vector<double> rate;
  std::optional<std::vector<double>> rho0;
  double rho0_scale = 1.5;
};

struct PointMassSpec {
  std::vector<double> mass;
  std::vector<double> damping;
  std::vector<TimeSignal> disturbance;  // empty = none
};

struct Scenario {
  std::string name = "scenario";
  int outputs = 0;
  std::vector<ConstraintPair> constraints;
  PlannerConfig planner;
  double k_x = 0.2;
  double k_v = 3.0;
  VelocityEnvelopeSpec velocity_envelope;
  std::variant<MobileRobotParams, PointMassSpec> plant;
  // Initial output (hand position for the robot).
  std::vector<double> x0;
  // Robot only.
  double theta0 = 0.0;
  std::vector<double> psi0;
  // Point mass only.
  std::vector<double> v0;
  SimConfig sim;

  // Source line of each section/entry path, for diagnostics.
  std::map<std::string, int> source_lines;
  int line_of(const std::string& path) const;
};

// Schema error while reading a scenario (missing keys, wrong types).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

TimeSignal signal_from_config(const config::Value& value);
config::Value signal_to_config(const TimeSignal& signal);

Scenario scenario_from_config(const config::Block& root);
config::Block scenario_to_config(const Scenario& scenario);

// Parse + overrides. Throws config::ParseError or ScenarioError.
Scenario parse_scenario(std::string_view text,
                        const std::vector<std::string>& overrides = {});
Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides = {});
std::string serialize_scenario(const Scenario& scenario);

struct ValidationIssue {
  std::string check;  // e.g. "feasibility-margin", "initial-compatibility"
  std::string message;
  double time = 0.0;  // sampled time of violation, NaN if not time-based
  int output = -1;
  int line = 0;
};

std::string describe(const ValidationIssue& issue);

// Static checks without simulating: parameter signs, hard/soft band widths
// against eps_hard/eps_soft sampled over [0, t_end], compatibility of the
// bands at t = 0, x(0) strictly inside the initial funnel, velocity envelope
// positivity and |e_v(0)| < gamma_v(0).
std::vector<ValidationIssue> validate_scenario(const Scenario& scenario);

// Builds the closed loop (resolving automatic velocity envelopes). Throws
// std::invalid_argument with the first validation issue if the scenario does
// not validate.
ClosedLoop build_closed_loop(const Scenario& scenario);

SimTrace simulate(const Scenario& scenario);
SimTrace simulate(const Scenario& scenario, const SimConfig& config);
SimTrace oracle_simulate(const Scenario& scenario);

CheckReport check_trace(const SimTrace& trace, const Scenario& scenario);

// The mobile-robot reproduction scenario: box-shaped hard constraints, a
// circular moving reference with exponentially shrinking tracking
// tolerance, smooth planner. Only k_c varies between the bundled files.
Scenario reference_scenario(double k_c = 3.0);

}  // namespace ccfunnel

#endif  // CCFUNNEL_SCENARIO_H_
