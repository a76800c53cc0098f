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

#include "ccfunnel/planner.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ccfunnel/fault.h"

namespace ccfunnel {

void PlannerConfig::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("planner: mu must be > 0");
  if (!(k_c > 0.0)) throw std::invalid_argument("planner: k_c must be > 0");
  if (variant == PlannerVariant::kSmooth) {
    if (!(kappa > 0.0)) {
      throw std::invalid_argument("planner: kappa must be > 0");
    }
    if (!(nu > 0.0)) throw std::invalid_argument("planner: nu must be > 0");
  }
}

PlannerState PlannerState::zero(int outputs) {
  return PlannerState{std::vector<double>(outputs, 0.0),
                      std::vector<double>(outputs, 0.0)};
}

Gaps eta(const ConstraintPair& pair, double t) {
  return Gaps{pair.hard_upper.value(t) - pair.soft_lower.value(t),
              pair.soft_upper.value(t) - pair.hard_lower.value(t)};
}

double switch_weight(double gap, const PlannerConfig& cfg) {
  const double d = gap - cfg.mu;
  if (cfg.variant == PlannerVariant::kSmooth) {
    return 0.5 * (1.0 - std::tanh(cfg.kappa * d));
  }
  if (d > 0.0) return 0.0;
  if (d < 0.0) return 1.0;
  return 0.5;
}

double modification_rate(double phi, double gap, const PlannerConfig& cfg,
                         int index) {
  const double weight = switch_weight(gap, cfg);
  const double denom = gap + phi;
  if (!(denom > kPlannerSingularityFloor)) {
    std::ostringstream msg;
    msg << "eta + phi = " << denom << " fell below the singularity floor";
    throw FaultError({FaultKind::kPlannerInfeasibility,
                      std::numeric_limits<double>::quiet_NaN(), index,
                      msg.str()});
  }
  return weight / denom - cfg.k_c * phi;
}

ModificationRates modification_rates(double phi_lower, double phi_upper,
                                     const Gaps& gaps,
                                     const PlannerConfig& cfg, int index) {
  return {modification_rate(phi_lower, gaps.lower, cfg, index),
          modification_rate(phi_upper, gaps.upper, cfg, index)};
}

void planner_rates(std::span<const ConstraintPair> constraints,
                   const PlannerConfig& cfg, double t,
                   std::span<const double> phi_lower,
                   std::span<const double> phi_upper,
                   std::span<double> dphi_lower,
                   std::span<double> dphi_upper) {
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Gaps g = eta(constraints[i], t);
    const auto r = modification_rates(phi_lower[i], phi_upper[i], g, cfg,
                                      static_cast<int>(i));
    dphi_lower[i] = r.lower;
    dphi_upper[i] = r.upper;
  }
}

PlannerState step_modification(const PlannerState& state,
                               std::span<const ConstraintPair> constraints,
                               const PlannerConfig& cfg, double t, double h,
                               Scheme scheme) {
  if (!(h > 0.0)) throw std::invalid_argument("step_modification: h <= 0");
  const int n = state.size();
  Eigen::VectorXd y(2 * n);
  for (int i = 0; i < n; ++i) {
    y[i] = state.phi_lower[i];
    y[n + i] = state.phi_upper[i];
  }
  auto rhs = [&](double tau, const Eigen::VectorXd& s) {
    Eigen::VectorXd ds(2 * n);
    planner_rates(constraints, cfg, tau, {s.data(), std::size_t(n)},
                  {s.data() + n, std::size_t(n)}, {ds.data(), std::size_t(n)},
                  {ds.data() + n, std::size_t(n)});
    return ds;
  };
  Eigen::VectorXd next;
  try {
    next = integrate_step(scheme, rhs, t, y, h);
  } catch (FaultError& e) {
    Fault f = e.fault();
    f.time = t;
    throw FaultError(std::move(f));
  }
  PlannerState out = state;
  for (int i = 0; i < n; ++i) {
    out.phi_lower[i] = std::max(next[i], 0.0);
    out.phi_upper[i] = std::max(next[n + i], 0.0);
  }
  return out;
}

double smooth_max(double a, double b, double nu) {
  const double m = std::max(a, b);
  const double rest = std::min(a, b);
  return m + std::log1p(std::exp(nu * (rest - m))) / nu;
}

double smooth_min(double a, double b, double nu) {
  return -smooth_max(-a, -b, nu);
}

Bounds nonsmooth_bounds(double phi_lower, double phi_upper, double soft_lower,
                        double soft_upper, double hard_lower,
                        double hard_upper) {
  return {std::max(soft_lower - phi_lower, hard_lower),
          std::min(soft_upper + phi_upper, hard_upper)};
}

Bounds smooth_bounds(double phi_lower, double phi_upper, double soft_lower,
                     double soft_upper, double hard_lower, double hard_upper,
                     double nu) {
  return {smooth_max(soft_lower - phi_lower, hard_lower, nu),
          smooth_min(soft_upper + phi_upper, hard_upper, nu)};
}

Bounds funnel_bounds(double phi_lower, double phi_upper,
                     const ConstraintPair& pair, const PlannerConfig& cfg,
                     double t) {
  const double sl = pair.soft_lower.value(t);
  const double su = pair.soft_upper.value(t);
  const double hl = pair.hard_lower.value(t);
  const double hu = pair.hard_upper.value(t);
  if (cfg.variant == PlannerVariant::kSmooth) {
    return smooth_bounds(phi_lower, phi_upper, sl, su, hl, hu, cfg.nu);
  }
  return nonsmooth_bounds(phi_lower, phi_upper, sl, su, hl, hu);
}

}  // namespace ccfunnel
