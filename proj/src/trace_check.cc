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

#include "ccfunnel/trace_check.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace ccfunnel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for recomputing planner bounds from recorded values.
constexpr double kRecomputeTolerance = 1e-12;

// Tracks the minimum of a per-(row, output) quantity.
class Worst {
 public:
  void update(double value, std::size_t row, double t, int output) {
    // NaN is sticky: once seen it stays the reported worst value.
    if (seen_ && (std::isnan(value_) || !(std::isnan(value) || value < value_))) {
      return;
    }
    value_ = value;
    row_ = row;
    t_ = t;
    output_ = output;
    seen_ = true;
  }

  CheckResult result(std::string name, bool passed,
                     std::string detail = {}) const {
    CheckResult r;
    r.name = std::move(name);
    r.passed = passed;
    r.margin = seen_ ? value_ : kInf;
    if (seen_) {
      r.row = row_;
      r.time = t_;
      r.output = output_;
    }
    r.detail = std::move(detail);
    return r;
  }

  bool seen() const { return seen_; }
  double value() const { return value_; }

 private:
  double value_ = kInf;
  std::size_t row_ = 0;
  double t_ = 0.0;
  int output_ = -1;
  bool seen_ = false;
};

using RowMetric = std::function<double(const TraceRow&, int)>;

Worst scan(const SimTrace& trace, const RowMetric& metric) {
  Worst w;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    for (int i = 0; i < trace.outputs; ++i) {
      w.update(metric(trace.rows[r], i), r, trace.rows[r].t, i);
    }
  }
  return w;
}

bool row_finite(const TraceRow& row) {
  auto all = [](const Eigen::VectorXd& v) { return v.allFinite(); };
  return std::isfinite(row.t) && all(row.x) && all(row.v) && all(row.v_d) &&
         all(row.e_v) && all(row.u) && all(row.x_hat) && all(row.ev_hat) &&
         all(row.phi_lower) && all(row.phi_upper) && all(row.rho_lower) &&
         all(row.rho_upper) && all(row.soft_lower) && all(row.soft_upper) &&
         all(row.hard_lower) && all(row.hard_upper) && all(row.gamma_v);
}

double fit_log_slope(const std::vector<double>& t,
                     const std::vector<double>& phi) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double y = std::log(phi[k]);
    st += t[k];
    sy += y;
    stt += t[k] * t[k];
    sty += t[k] * y;
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

std::vector<RecoveryFit> fit_recovery_rates(
    const SimTrace& trace, const PlannerConfig& planner,
    const RecoveryCheckOptions& options) {
  std::vector<RecoveryFit> fits;
  const double threshold = planner.mu + options.gap_margin;
  for (int i = 0; i < trace.outputs; ++i) {
    for (bool upper : {false, true}) {
      auto gap = [&](const TraceRow& r) {
        return upper ? r.soft_upper[i] - r.hard_lower[i]
                     : r.hard_upper[i] - r.soft_lower[i];
      };
      auto phi = [&](const TraceRow& r) {
        return upper ? r.phi_upper[i] : r.phi_lower[i];
      };
      std::size_t r = 0;
      while (r < trace.rows.size()) {
        if (!(gap(trace.rows[r]) > threshold)) {
          ++r;
          continue;
        }
        const std::size_t begin = r;
        while (r < trace.rows.size() && gap(trace.rows[r]) > threshold) ++r;
        const std::size_t end = r;  // exclusive
        const double duration = trace.rows[end - 1].t - trace.rows[begin].t;
        if (duration < options.min_duration) continue;
        if (!(phi(trace.rows[begin]) > kInactivePhi)) continue;
        std::vector<double> ts, ys;
        for (std::size_t k = begin; k < end; ++k) {
          const double p = phi(trace.rows[k]);
          if (!(p > 0.0) || !std::isnormal(p)) break;
          ts.push_back(trace.rows[k].t);
          ys.push_back(p);
        }
        if (ts.size() < 3 || ts.back() - ts.front() < options.min_duration) {
          continue;
        }
        fits.push_back({i, upper, ts.front(), ts.back(),
                        -fit_log_slope(ts, ys)});
      }
    }
  }
  return fits;
}

CheckReport check_trace(const SimTrace& trace, const PlannerConfig& planner,
                        const RecoveryCheckOptions& recovery) {
  CheckReport report;
  auto& checks = report.checks;

  {
    CheckResult r;
    r.name = "no-faults";
    r.passed = trace.faults.empty();
    r.margin = static_cast<double>(trace.faults.size());
    if (!trace.faults.empty()) {
      r.time = trace.faults.front().time;
      r.output = trace.faults.front().index;
      r.detail = describe(trace.faults.front());
    }
    checks.push_back(r);
  }
  {
    CheckResult r;
    r.name = "rows-present";
    r.passed = !trace.rows.empty();
    r.margin = static_cast<double>(trace.rows.size());
    checks.push_back(r);
  }
  {
    CheckResult r;
    r.name = "finite";
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      if (!row_finite(trace.rows[k])) {
        r.passed = false;
        r.row = k;
        r.time = trace.rows[k].t;
        break;
      }
    }
    checks.push_back(r);
  }
  {
    CheckResult r;
    r.name = "time-increasing";
    r.margin = kInf;
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
      const double dt = trace.rows[k].t - trace.rows[k - 1].t;
      if (dt < r.margin) {
        r.margin = dt;
        r.row = k;
        r.time = trace.rows[k].t;
      }
    }
    r.passed = !(r.margin <= 0.0);
    checks.push_back(r);
  }

  const Worst hard = scan(trace, [](const TraceRow& r, int i) {
    return std::min(r.hard_upper[i] - r.x[i], r.x[i] - r.hard_lower[i]);
  });
  checks.push_back(hard.result("hard-constraints", !(hard.value() <= 0.0)));

  const Worst funnel = scan(trace, [](const TraceRow& r, int i) {
    return std::min(r.rho_upper[i] - r.x[i], r.x[i] - r.rho_lower[i]);
  });
  checks.push_back(
      funnel.result("funnel-membership", !(funnel.value() <= 0.0)));

  const Worst velocity = scan(trace, [](const TraceRow& r, int i) {
    return r.gamma_v[i] - std::abs(r.e_v[i]);
  });
  checks.push_back(
      velocity.result("velocity-funnel", !(velocity.value() <= 0.0)));

  const Worst gap = scan(trace, [](const TraceRow& r, int i) {
    return r.rho_upper[i] - r.rho_lower[i];
  });
  checks.push_back(gap.result("funnel-gap", !(gap.value() <= 0.0),
                              "margin is the smallest funnel width"));

  const Worst phi = scan(trace, [](const TraceRow& r, int i) {
    return std::min(r.phi_lower[i], r.phi_upper[i]);
  });
  checks.push_back(phi.result("phi-nonnegative", !(phi.value() < 0.0)));

  const Worst within = scan(trace, [](const TraceRow& r, int i) {
    return std::min(r.rho_lower[i] - r.hard_lower[i],
                    r.hard_upper[i] - r.rho_upper[i]);
  });
  checks.push_back(
      within.result("funnel-within-hard", !(within.value() < 0.0)));

  const Worst soft = scan(trace, [](const TraceRow& r, int i) {
    if (!(r.phi_lower[i] < kInactivePhi && r.phi_upper[i] < kInactivePhi)) {
      return kInf;
    }
    return std::min(r.x[i] - r.soft_lower[i], r.soft_upper[i] - r.x[i]);
  });
  checks.push_back(soft.result("soft-when-inactive", !(soft.value() <= 0.0),
                               "rows with both modification signals < 1e-9"));

  if (planner.variant == PlannerVariant::kSmooth) {
    const double bound = std::numbers::ln2 / planner.nu;
    const Worst approx = scan(trace, [&](const TraceRow& r, int i) {
      const Bounds ns = nonsmooth_bounds(
          r.phi_lower[i], r.phi_upper[i], r.soft_lower[i], r.soft_upper[i],
          r.hard_lower[i], r.hard_upper[i]);
      const double dl = r.rho_lower[i] - ns.lower;
      const double du = ns.upper - r.rho_upper[i];
      return std::min({dl, du, bound - dl, bound - du}) + kRecomputeTolerance;
    });
    std::ostringstream detail;
    detail << "smooth bounds within [0, ln2/nu = " << bound
           << "] of max/min bounds";
    checks.push_back(approx.result("smooth-approximation",
                                   !(approx.value() < 0.0), detail.str()));
  } else {
    const Worst approx = scan(trace, [&](const TraceRow& r, int i) {
      const Bounds ns = nonsmooth_bounds(
          r.phi_lower[i], r.phi_upper[i], r.soft_lower[i], r.soft_upper[i],
          r.hard_lower[i], r.hard_upper[i]);
      return kRecomputeTolerance -
             std::max(std::abs(r.rho_lower[i] - ns.lower),
                      std::abs(r.rho_upper[i] - ns.upper));
    });
    checks.push_back(approx.result("bounds-consistent",
                                   !(approx.value() < 0.0),
                                   "bounds equal max/min of recorded signals"));
  }

  {
    CheckResult r;
    r.name = "recovery-rate";
    if (planner.variant == PlannerVariant::kNonsmooth) {
      report.recovery_fits = fit_recovery_rates(trace, planner, recovery);
      r.margin = 0.0;
      for (const auto& fit : report.recovery_fits) {
        const double err = std::abs(fit.rate - planner.k_c) / planner.k_c;
        if (err >= r.margin) {
          r.margin = err;
          r.time = fit.t_begin;
          r.output = fit.output;
        }
      }
      r.passed = r.margin <= recovery.rate_tolerance;
      std::ostringstream detail;
      detail << report.recovery_fits.size()
             << " interval(s); margin is the largest relative rate error";
      r.detail = detail.str();
    } else {
      r.detail = "not applicable to the smooth variant";
    }
    checks.push_back(r);
  }

  {
    const Worst u = scan(trace, [](const TraceRow& r, int i) {
      return -std::abs(r.u[i]);
    });
    CheckResult r = u.result("max-control", true, "informational");
    r.margin = -r.margin;
    checks.push_back(r);
  }
  {
    const Worst phi = scan(trace, [](const TraceRow& r, int i) {
      return -std::max(r.phi_lower[i], r.phi_upper[i]);
    });
    CheckResult r = phi.result("max-phi", true, "informational");
    r.margin = -r.margin;
    checks.push_back(r);
  }
  return report;
}

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CheckReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(10);
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(22)
       << c.name << std::right << " margin=" << c.margin;
    if (c.row) os << " row=" << *c.row << " t=" << c.time;
    if (c.output >= 0) os << " output=" << c.output + 1;
    if (!c.detail.empty()) os << "  # " << c.detail;
    os << "\n";
  }
  for (const auto& f : recovery_fits) {
    os << "     recovery " << (f.upper ? "phiU_" : "phiL_") << f.output + 1
       << " t=[" << f.t_begin << ", " << f.t_end << "] rate=" << f.rate
       << "\n";
  }
  os << (passed() ? "RESULT PASS" : "RESULT FAIL") << "\n";
  return os.str();
}

}  // namespace ccfunnel
