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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ccfunnel/controller.h"
#include "ccfunnel/scenario.h"
#include "ccfunnel/signal.h"
#include "ccfunnel/trace_check.h"
#include "oracles.h"

namespace ccfunnel {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Runs {
  Scenario kc3 = reference_scenario(3.0);
  Scenario kc03 = reference_scenario(0.3);
  SimTrace trace3, trace03;
  CheckReport report3, report03;
  double seconds3 = 0;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const Runs& FullRuns() {
  static const Runs runs = [] {
    Runs r;
    SimConfig cfg = r.kc3.sim;
    cfg.record_stride = 1;
    const auto t0 = std::chrono::steady_clock::now();
    r.trace3 = simulate(r.kc3, cfg);
    r.seconds3 = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    r.trace03 = simulate(r.kc03, cfg);
    r.report3 = check_trace(r.trace3, r.kc3);
    r.report03 = check_trace(r.trace03, r.kc03);
    return r;
  }();
  return runs;
}

std::string FaultText(const SimTrace& tr) {
  return tr.faults.empty() ? "" : " fault: " + describe(tr.faults.front());
}

Outcome HardConstraintSafety() {
  const Runs& r = FullRuns();
  const double margin = r.report3.find("hard-constraints")->margin;
  const bool ok = r.trace3.ok() && margin > 0.0 && r.seconds3 <= 5.0;
  return {ok, Fmt("min hard-bound distance %.6g over %zu rows, runtime %.2f s",
                  margin, r.trace3.rows.size(), r.seconds3) +
                  FaultText(r.trace3)};
}

Outcome FunnelMembership() {
  const Runs& r = FullRuns();
  const double m3 = r.report3.find("funnel-membership")->margin;
  const double m03 = r.report03.find("funnel-membership")->margin;
  const bool ok = r.trace3.ok() && r.trace03.ok() && m3 > 0 && m03 > 0;
  return {ok, Fmt("min distance to funnel: k_c=3 %.6g, k_c=0.3 %.6g; faults %zu",
                  m3, m03, r.trace3.faults.size() + r.trace03.faults.size())};
}

Outcome VelocityFunnel() {
  const Runs& r = FullRuns();
  const double m3 = r.report3.find("velocity-funnel")->margin;
  const double m03 = r.report03.find("velocity-funnel")->margin;
  return {r.report3.find("velocity-funnel")->passed &&
              r.report03.find("velocity-funnel")->passed,
          Fmt("min (1 - |e_v|/gamma_v): k_c=3 %.6g, k_c=0.3 %.6g", m3, m03)};
}

Outcome PlannerFeasibility() {
  const Runs& r = FullRuns();
  const double g3 = r.report3.find("funnel-gap")->margin;
  const double g03 = r.report03.find("funnel-gap")->margin;
  const bool phi_ok = r.report3.find("phi-nonnegative")->passed &&
                      r.report03.find("phi-nonnegative")->passed;
  return {g3 > 0 && g03 > 0 && phi_ok,
          Fmt("min funnel width: k_c=3 %.6g, k_c=0.3 %.6g; phi >= 0: %s", g3,
              g03, phi_ok ? "yes" : "no")};
}

Outcome ExponentialRecovery() {
  const std::string path = std::string(CCFUNNEL_TEST_DATA) + "/recovery.scn";
  std::ostringstream detail;
  bool ok = true;
  for (const char* kc : {"planner.k_c=1", "planner.k_c=3"}) {
    const Scenario s = load_scenario(path, {kc});
    const SimTrace tr = simulate(s);
    const CheckReport report = check_trace(tr, s);
    const CheckResult* rate = report.find("recovery-rate");
    const bool run_ok = tr.ok() && rate->passed && !report.recovery_fits.empty();
    ok = ok && run_ok;
    detail << "k_c=" << s.planner.k_c << ": " << report.recovery_fits.size()
           << " interval(s), worst relative error " << rate->margin << "; ";
  }
  std::string text = detail.str();
  return {ok, text.substr(0, text.size() - 2)};
}

Outcome SoftConsistency() {
  const Runs& r = FullRuns();
  std::size_t inactive = 0;
  for (const SimTrace* tr : {&r.trace3, &r.trace03}) {
    for (const auto& row : tr->rows) {
      for (int i = 0; i < tr->outputs; ++i) {
        if (row.phi_lower[i] < kInactivePhi && row.phi_upper[i] < kInactivePhi) {
          ++inactive;
        }
      }
    }
  }
  const bool ok = r.report3.find("soft-when-inactive")->passed &&
                  r.report03.find("soft-when-inactive")->passed && inactive > 0;
  return {ok, Fmt("%zu inactive (row, output) samples, min soft margin %.6g",
                  inactive,
                  std::min(r.report3.find("soft-when-inactive")->margin,
                           r.report03.find("soft-when-inactive")->margin))};
}

Outcome KcComparison() {
  const Runs& r = FullRuns();
  std::ostringstream detail;
  bool any = false;
  for (int i = 0; i < 2; ++i) {
    double max3 = 0, max03 = 0;
    for (const auto& row : r.trace3.rows) max3 = std::max(max3, row.phi_upper[i]);
    for (const auto& row : r.trace03.rows) max03 = std::max(max03, row.phi_upper[i]);
    any = any || max03 > max3;
    detail << "max phiU_" << i + 1 << ": k_c=0.3 " << max03 << " vs k_c=3 "
           << max3 << "; ";
  }
  std::string text = detail.str();
  return {any && r.trace3.ok() && r.trace03.ok(),
          text.substr(0, text.size() - 2)};
}

Outcome SmoothApproximation() {
  const Scenario s = reference_scenario();
  PlannerConfig smooth = s.planner;
  PlannerConfig nonsmooth = s.planner;
  nonsmooth.variant = PlannerVariant::kNonsmooth;
  const double bound = std::numbers::ln2 / smooth.nu;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> time(0.0, 30.0), phi(0.0, 3.0);
  double worst = 0;
  int strict = 0, tied = 0, bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double t = time(rng);
    const double pl = phi(rng), pu = phi(rng);
    const auto& c = s.constraints[k % 2];
    const Bounds sm = funnel_bounds(pl, pu, c, smooth, t);
    const Bounds ns = funnel_bounds(pl, pu, c, nonsmooth, t);
    const double dl = sm.lower - ns.lower, du = ns.upper - sm.upper;
    worst = std::max({worst, dl, du});
    if (dl > bound || du > bound || dl < 0 || du < 0) ++bad;
    // Strict ordering wherever the offset is representable at the bound.
    const double a = c.soft_lower.value(t) - pl, b = c.hard_lower.value(t);
    const double off = std::log1p(std::exp(-smooth.nu * std::abs(a - b))) /
                       smooth.nu;
    if (ns.lower + off != ns.lower) {
      if (dl > 0) ++strict; else ++bad;
    } else {
      ++tied;
    }
    const double a2 = c.soft_upper.value(t) + pu, b2 = c.hard_upper.value(t);
    const double off2 = std::log1p(std::exp(-smooth.nu * std::abs(a2 - b2))) /
                        smooth.nu;
    if (ns.upper - off2 != ns.upper) {
      if (du > 0) ++strict; else ++bad;
    } else {
      ++tied;
    }
  }
  return {bad == 0,
          Fmt("10000 samples: max offset %.6g <= ln2/nu = %.6g; %d strict, %d "
              "below resolution, %d violations",
              worst, bound, strict, tied, bad)};
}

Outcome OracleEquivalence() {
  const Scenario s = reference_scenario(3.0);
  const SimTrace fast = simulate(s);
  const SimTrace oracle = oracle_simulate(s);
  double sup = std::numeric_limits<double>::infinity();
  if (fast.ok() && oracle.ok() && fast.rows.size() == oracle.rows.size()) {
    sup = 0;
    for (std::size_t k = 0; k < fast.rows.size(); ++k) {
      if (std::abs(fast.rows[k].t - oracle.rows[k].t) > 1e-9) {
        sup = std::numeric_limits<double>::infinity();
        break;
      }
      sup = std::max(sup,
                     (fast.rows[k].x - oracle.rows[k].x).cwiseAbs().maxCoeff());
    }
  }
  const double transform = testing::transform_equivalence_error(10.0);
  return {sup <= 1e-3 && transform <= 1e-6,
          Fmt("rk4 vs Euler(1e-5) sup|x| %.3g over %zu rows; hand-EL vs "
              "unicycle sup %.3g over 10 s",
              sup, fast.rows.size(), transform)};
}

Outcome ControllerContracts() {
  const double ln3 = std::log(3.0);
  int failures = 0, total = 0;
  auto expect = [&](bool ok) {
    ++total;
    if (!ok) ++failures;
  };
  auto near = [&](double a, double b) { expect(std::abs(a - b) <= 1e-12); };
  auto vec = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  const FunnelBounds unit{vec(-1), vec(1)};

  near(normalize_output(1.0, -1, 3), 0.0);
  near(normalize_output(2.0, -1, 3), 0.5);
  near(transform(0.0), 0.0);
  near(transform(0.5), ln3);
  near(transform(-0.5), -ln3);
  near(velocity_reference(vec(0.0), unit, 0.2)[0], 0.0);
  near(velocity_reference(vec(0.5), unit, 0.2)[0], -0.2 * (8.0 / 3.0) * ln3);
  double previous = 0;
  for (double z : {0.9, 0.99, 0.999}) {
    const double v = std::abs(velocity_reference(vec(z), unit, 0.2)[0]);
    expect(v > previous);
    previous = v;
  }
  near(control_input(vec(0.0), vec(2.0), 3.0)[0], 0.0);
  near(control_input(vec(1.0), vec(2.0), 3.0)[0], -3.0 * (4.0 / 3.0) * ln3);
  near(control_input(vec(-1.0), vec(2.0), 3.0)[0], 3.0 * (4.0 / 3.0) * ln3);
  for (double z = -0.999; z <= 0.999; z += 0.001) {
    near(inverse_transform(transform(z)), z);
  }

  ControllerConfig cfg;
  cfg.gamma_v = {TimeSignal::exp_envelope(2, 0.1, 0.3)};
  const Eigen::VectorXd x = vec(0.4);
  const Eigen::VectorXd v_d = velocity_reference(x, unit, cfg.k_x);
  near(controller_step(0.5, x, v_d, unit, cfg).u[0], 0.0);
  const double u1 = controller_step(0.5, x, vec(0.3), unit, cfg).u[0];
  cfg.k_v *= 2;
  near(controller_step(0.5, x, vec(0.3), unit, cfg).u[0], 2 * u1);
  return {failures == 0, Fmt("%d of %d controller examples hold at 1e-12",
                             total - failures, total)};
}

Outcome FiniteDifferences() {
  std::mt19937_64 rng(2026);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const std::vector<std::pair<const char*, std::function<TimeSignal()>>> kinds = {
      {"constant", [&] { return TimeSignal::constant(uni(-10, 10)); }},
      {"sinusoid",
       [&] {
         return TimeSignal::sinusoid(uni(-6, 6), uni(0, 5), uni(-4, 4),
                                     uni(-3, 3));
       }},
      {"exp_envelope",
       [&] {
         return TimeSignal::exp_envelope(uni(0, 8), uni(0, 2), uni(0.05, 2));
       }},
      {"sum",
       [&] {
         return TimeSignal::sum(
             {TimeSignal::sinusoid(uni(-6, 6), uni(0, 5), uni(-4, 4), 0),
              TimeSignal::exp_envelope(uni(0, 8), uni(0, 2), uni(0.05, 2))});
       }},
      {"scaled",
       [&] {
         return TimeSignal::scaled(
             uni(-3, 3),
             TimeSignal::sinusoid(uni(-6, 6), uni(0, 5), uni(-4, 4), 0));
       }},
  };
  int bad = 0;
  double worst = 0;
  for (const auto& [name, make] : kinds) {
    for (int k = 0; k < 100; ++k) {
      const TimeSignal s = make();
      const double t = uni(1e-4, 30), h = 1e-5;
      const double fd = (s.value(t + h) - s.value(t - h)) / (2 * h);
      const double d = s.derivative(t);
      const double rel = std::abs(d - fd) / (1 + std::abs(d));
      worst = std::max(worst, rel);
      if (rel > 1e-6) ++bad;
    }
  }
  return {bad == 0, Fmt("500 samples over 5 variants, worst scaled error %.3g",
                        worst)};
}

}  // namespace
}  // namespace ccfunnel

int main() {
  using namespace ccfunnel;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"hard-constraint safety", HardConstraintSafety},
      {"funnel membership", FunnelMembership},
      {"velocity funnel", VelocityFunnel},
      {"planner feasibility", PlannerFeasibility},
      {"exponential recovery", ExponentialRecovery},
      {"soft-constraint consistency", SoftConsistency},
      {"k_c comparison", KcComparison},
      {"smooth-approximation bound", SmoothApproximation},
      {"oracle equivalence", OracleEquivalence},
      {"controller unit contracts", ControllerContracts},
      {"finite-difference derivatives", FiniteDifferences},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", k + 1,
                criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s: %zu of %zu criteria passed\n", failed ? "FAIL" : "PASS",
              criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
