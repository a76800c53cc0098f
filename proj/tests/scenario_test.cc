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

#include "ccfunnel/scenario.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccfunnel/controller.h"

namespace ccfunnel {
namespace {

std::string Bundled(const std::string& name) {
  return std::string(CCFUNNEL_SCENARIO_DIR) + "/" + name;
}

std::string TestData(const std::string& name) {
  return std::string(CCFUNNEL_TEST_DATA) + "/" + name;
}

std::vector<ValidationIssue> Issues(const std::vector<std::string>& overrides,
                                    const std::string& file = "paper_kc3.scn") {
  return validate_scenario(load_scenario(Bundled(file), overrides));
}

bool HasCheck(const std::vector<ValidationIssue>& issues,
              const std::string& check) {
  for (const auto& i : issues) {
    if (i.check == check) return true;
  }
  return false;
}

TEST(BundledScenarios, MatchReferenceScenario) {
  EXPECT_EQ(serialize_scenario(load_scenario(Bundled("paper_kc3.scn"))),
            serialize_scenario(reference_scenario(3.0)));
  EXPECT_EQ(serialize_scenario(load_scenario(Bundled("paper_kc03.scn"))),
            serialize_scenario(reference_scenario(0.3)));
}

TEST(BundledScenarios, DifferOnlyInPlannerRate) {
  const Scenario a = load_scenario(Bundled("paper_kc03.scn"));
  const Scenario b =
      load_scenario(Bundled("paper_kc3.scn"), {"planner.k_c=0.3",
                                              "name=paper_kc03"});
  EXPECT_EQ(serialize_scenario(a), serialize_scenario(b));
}

TEST(BundledScenarios, Validate) {
  for (const char* f : {"paper_kc3.scn", "paper_kc03.scn"}) {
    const auto issues = validate_scenario(load_scenario(Bundled(f)));
    EXPECT_TRUE(issues.empty()) << f << ": " << describe(issues.front());
  }
}

TEST(ReferenceScenario, Constants) {
  const Scenario s = reference_scenario();
  ASSERT_EQ(s.outputs, 2);
  EXPECT_EQ(s.constraints[0].hard_upper.value(0), 6.58);
  EXPECT_EQ(s.constraints[1].hard_lower.value(0), -4.63);
  const double t = 7.3;
  const double xd1 = -1.5 + 5.8 * std::cos(0.24 * t + 1.5);
  const double xd2 = 5.8 * std::sin(0.24 * t + 1.5);
  const double g1 = (3.15 - 0.2) * std::exp(-0.7 * t) + 0.2;
  const double g2 = (6.13 - 0.2) * std::exp(-0.7 * t) + 0.2;
  EXPECT_NEAR(s.constraints[0].soft_lower.value(t), xd1 - g1, 1e-13);
  EXPECT_NEAR(s.constraints[0].soft_upper.value(t), xd1 + g1, 1e-13);
  EXPECT_NEAR(s.constraints[1].soft_lower.value(t), xd2 - g2, 1e-13);
  EXPECT_NEAR(s.constraints[1].soft_upper.value(t), xd2 + g2, 1e-13);
  // rho0 of the tracking tolerance exceeds the initial tracking error.
  EXPECT_GT(3.15, std::abs(-3.19 - (-1.5 + 5.8 * std::cos(1.5))));
  EXPECT_GT(6.13, std::abs(1.70 - 5.8 * std::sin(1.5)));
  EXPECT_EQ(s.planner.mu, 0.01);
  EXPECT_EQ(s.planner.kappa, 4.0);
  EXPECT_EQ(s.planner.nu, 10.0);
  EXPECT_EQ(s.k_x, 0.2);
  EXPECT_EQ(s.k_v, 3.0);
  EXPECT_EQ(s.theta0, -0.33);
  EXPECT_EQ(s.psi0, (std::vector<double>{0.2, -0.1}));
}

TEST(ReferenceScenario, InitialControlIsFinite) {
  const Scenario s = reference_scenario();
  const ClosedLoop loop = build_closed_loop(s);
  const auto out = loop.plant->outputs(loop.initial_state);
  FunnelBounds b{Eigen::VectorXd(2), Eigen::VectorXd(2)};
  for (int i = 0; i < 2; ++i) {
    const Bounds r = funnel_bounds(0, 0, s.constraints[i], s.planner, 0);
    b.lower[i] = r.lower;
    b.upper[i] = r.upper;
  }
  const ControllerOutput c =
      controller_step(0.0, out.x, out.v, b, loop.controller);
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE(std::isfinite(c.u[i]));
    EXPECT_LT(std::abs(c.x_hat[i]), 1.0);
    EXPECT_LT(std::abs(c.ev_hat[i]), 1.0);
    // Automatic envelope: 1.5 * max(|e_v(0)|, rho_inf).
    const double expected = 1.5 * std::max(std::abs(c.e_v[i]), 0.1);
    EXPECT_NEAR(loop.controller.gamma_v[i].value(0), expected, 1e-15);
    EXPECT_NEAR(std::abs(c.ev_hat[i]), std::abs(c.e_v[i]) / expected, 1e-15);
  }
}

TEST(RoundTrip, SerializeParseSerializeIsByteIdentical) {
  for (const std::string& path :
       {Bundled("paper_kc3.scn"), Bundled("paper_kc03.scn"),
        TestData("recovery.scn"), TestData("compatible.scn")}) {
    const std::string once = serialize_scenario(load_scenario(path));
    const std::string twice = serialize_scenario(parse_scenario(once));
    EXPECT_EQ(once, twice) << path;
  }
  Scenario s = reference_scenario();
  s.velocity_envelope.rho0 = std::vector<double>{2.5, 1.25};
  std::get<MobileRobotParams>(s.plant).disturbance = {};
  const std::string once = serialize_scenario(s);
  EXPECT_NE(once.find("rho0 = [2.5, 1.25]"), std::string::npos);
  EXPECT_NE(once.find("disturbance = [constant { value = 0 }"),
            std::string::npos);
  EXPECT_EQ(serialize_scenario(parse_scenario(once)), once);
}

TEST(Validation, NarrowHardBandReportsTime) {
  // Hard upper bound dips to 1.8 at t = 20; the hard band is then 1.8 + 6.58
  // wide, below eps_hard = 9.
  const auto issues = Issues(
      {"constraints.output_1.hard_upper=sinusoid { amp = 2.39, omega = "
       "0.15707963267948966, phase = 0, offset = 4.19 }",
       "constraints.output_1.eps_hard=9"});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].check, "feasibility-margin");
  EXPECT_EQ(issues[0].output, 0);
  EXPECT_GT(issues[0].time, 0.0);
  EXPECT_LT(issues[0].time, 20.0);
  EXPECT_GT(issues[0].line, 0);
  EXPECT_NE(describe(issues[0]).find("hard band width"), std::string::npos);
}

TEST(Validation, NarrowSoftBand) {
  const auto issues = Issues({"constraints.output_2.eps_soft=0.5"});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].check, "feasibility-margin");
  EXPECT_EQ(issues[0].output, 1);
  EXPECT_GT(issues[0].time, 0.0);
}

TEST(Validation, DisjointBandsAtStart) {
  const auto issues = Issues(
      {"constraints.output_2.soft_lower=constant { value = 5 }",
       "constraints.output_2.soft_upper=constant { value = 6 }"});
  ASSERT_FALSE(issues.empty());
  EXPECT_EQ(issues[0].check, "initial-compatibility");
  EXPECT_EQ(issues[0].time, 0.0);
  EXPECT_EQ(issues[0].output, 1);
}

TEST(Validation, InitialOutputOutsideFunnel) {
  const auto issues = Issues({"initial.x=[-6, 1.7]"});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].check, "initial-funnel");
  EXPECT_EQ(issues[0].output, 0);
  EXPECT_GT(issues[0].line, 0);
}

TEST(Validation, ExplicitVelocityEnvelopeTooSmall) {
  const auto issues =
      Issues({"controller.velocity_envelope.rho0=[0.01, 10]"});
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].check, "velocity-envelope");
  EXPECT_EQ(issues[0].output, 0);
}

TEST(Validation, ParameterErrors) {
  EXPECT_TRUE(HasCheck(Issues({"planner.k_c=0"}), "parameters"));
  EXPECT_TRUE(HasCheck(Issues({"sim.h=0.02"}), "parameters"));
  EXPECT_TRUE(HasCheck(Issues({"controller.k_v=-1"}), "parameters"));
  EXPECT_TRUE(HasCheck(Issues({"plant.hand_offset=0"}), "parameters"));
  EXPECT_TRUE(HasCheck(Issues({"initial.x=[1]"}), "parameters"));
  EXPECT_TRUE(HasCheck(
      Issues({"controller.velocity_envelope.rho0_scale=1"}), "parameters"));
  EXPECT_TRUE(HasCheck(validate_scenario(load_scenario(
                           TestData("recovery.scn"), {"plant.mass=[0]"})),
                       "parameters"));
}

TEST(Validation, BuildClosedLoopRejectsInvalidScenario) {
  const Scenario s =
      load_scenario(Bundled("paper_kc3.scn"), {"initial.x=[-6, 1.7]"});
  EXPECT_THROW(build_closed_loop(s), std::invalid_argument);
  EXPECT_THROW(simulate(s), std::invalid_argument);
}

int SchemaErrorLine(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  ADD_FAILURE() << "accepted";
  return -1;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Schema, ErrorsPointAtTheOffendingLine) {
  const std::string base = ReadFile(TestData("compatible.scn"));
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = base;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    s.replace(pos, from.size(), to);
    return s;
  };
  auto line_of = [&](const std::string& needle) {
    const auto pos = base.find(needle);
    return 1 + static_cast<int>(std::count(base.begin(), base.begin() + pos, '\n'));
  };
  EXPECT_EQ(SchemaErrorLine(replace("k_c = 1", "k_c = fast")), line_of("k_c = 1"));
  EXPECT_EQ(SchemaErrorLine(replace("variant = nonsmooth", "variant = wobbly")),
            line_of("variant = nonsmooth"));
  EXPECT_EQ(SchemaErrorLine(replace("soft_lower = sinusoid", "soft_lower = cosine")),
            line_of("soft_lower = sinusoid"));
  EXPECT_EQ(SchemaErrorLine(replace("model = point_mass", "model = tank")),
            line_of("model = point_mass"));
  EXPECT_EQ(SchemaErrorLine(replace("scheme = rk4", "scheme = rk45")),
            line_of("scheme = rk4"));
  // A missing entry points at its enclosing section.
  EXPECT_EQ(SchemaErrorLine(replace("  k_x = 1\n", "")),
            line_of("controller {"));
  EXPECT_EQ(SchemaErrorLine(replace("outputs = 1", "outputs = 1.5")),
            line_of("outputs = 1"));
  EXPECT_THROW(parse_scenario(replace("output_1 {", "output_9 {")),
               ScenarioError);
}

TEST(Schema, ParseErrorsPropagate) {
  EXPECT_THROW(parse_scenario("planner {\n"), config::ParseError);
  EXPECT_THROW(load_scenario(TestData("does_not_exist.scn")),
               std::runtime_error);
}

TEST(Schema, NumberIsShorthandForConstant) {
  const auto v = config::parse_value("2.5");
  EXPECT_EQ(signal_from_config(v), TimeSignal::constant(2.5));
}

TEST(Schema, SourceLines) {
  const Scenario s = load_scenario(TestData("recovery.scn"));
  EXPECT_GT(s.line_of("planner.k_c"), s.line_of("planner"));
  EXPECT_EQ(s.line_of("planner.not_there"), s.line_of("planner"));
  EXPECT_EQ(s.line_of("nothing"), 0);
}

}  // namespace
}  // namespace ccfunnel
