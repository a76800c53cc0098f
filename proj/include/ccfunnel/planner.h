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

// Online constraint-consistent funnel planning.
//
// Each output i carries a hard band (must never be left) and a soft band
// (desired performance). The planner integrates two nonnegative
// modification signals per output, phi_lower and phi_upper, that relax the
// soft bounds whenever the two bands are about to become incompatible, and
// decay exponentially at rate k_c once the conflict is resolved. The funnel
// handed to the controller is
//
//   rho_lower = max(soft_lower - phi_lower, hard_lower)
//   rho_upper = min(soft_upper + phi_upper, hard_upper)
//
// or a log-sum-exp smoothing of the same max/min in the smooth variant.

#ifndef CCFUNNEL_PLANNER_H_
#define CCFUNNEL_PLANNER_H_

#include <span>
#include <vector>

#include "ccfunnel/integrator.h"
#include "ccfunnel/signal.h"

namespace ccfunnel {

// Floor on eta + phi before it is used as a divisor.
inline constexpr double kPlannerSingularityFloor = 1e-9;

struct ConstraintPair {
  TimeSignal hard_lower;
  TimeSignal hard_upper;
  TimeSignal soft_lower;
  TimeSignal soft_upper;
  double eps_hard = 0.0;
  double eps_soft = 0.0;
};

enum class PlannerVariant { kNonsmooth, kSmooth };

struct PlannerConfig {
  double mu = 0.01;
  double k_c = 3.0;
  PlannerVariant variant = PlannerVariant::kSmooth;
  // Only read by the smooth variant.
  double kappa = 4.0;
  double nu = 10.0;

  // Throws std::invalid_argument when a parameter is not positive.
  void validate() const;
};

struct PlannerState {
  std::vector<double> phi_lower;
  std::vector<double> phi_upper;

  static PlannerState zero(int outputs);
  int size() const { return static_cast<int>(phi_lower.size()); }
};

// Compatibility gaps: lower = hard_upper - soft_lower,
// upper = soft_upper - hard_lower.
struct Gaps {
  double lower = 0.0;
  double upper = 0.0;
};

Gaps eta(const ConstraintPair& pair, double t);

// Coefficient multiplying 1/(eta + phi): 0.5 * (1 - sign(eta - mu)) for the
// nonsmooth variant, 0.5 * (1 - tanh(kappa * (eta - mu))) for the smooth one.
// sign(0) is taken as 0.
double switch_weight(double gap, const PlannerConfig& cfg);

// Rate of a single modification signal. Throws FaultError
// (kPlannerInfeasibility) when gap + phi <= kPlannerSingularityFloor.
double modification_rate(double phi, double gap, const PlannerConfig& cfg,
                         int index = -1);

struct ModificationRates {
  double lower = 0.0;
  double upper = 0.0;
};

ModificationRates modification_rates(double phi_lower, double phi_upper,
                                     const Gaps& gaps,
                                     const PlannerConfig& cfg, int index = -1);

// Rates for every output, written into dphi_lower / dphi_upper (sized like
// the constraints).
void planner_rates(std::span<const ConstraintPair> constraints,
                   const PlannerConfig& cfg, double t,
                   std::span<const double> phi_lower,
                   std::span<const double> phi_upper,
                   std::span<double> dphi_lower, std::span<double> dphi_upper);

// Advances every modification signal by one step of the given scheme, then
// clamps to phi >= 0.
PlannerState step_modification(const PlannerState& state,
                               std::span<const ConstraintPair> constraints,
                               const PlannerConfig& cfg, double t, double h,
                               Scheme scheme = Scheme::kRk4);

// Shift-stabilized log-sum-exp: (1/nu) ln(e^{nu a} + e^{nu b}).
double smooth_max(double a, double b, double nu);
// -(1/nu) ln(e^{-nu a} + e^{-nu b}).
double smooth_min(double a, double b, double nu);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

Bounds funnel_bounds(double phi_lower, double phi_upper,
                     const ConstraintPair& pair, const PlannerConfig& cfg,
                     double t);

Bounds nonsmooth_bounds(double phi_lower, double phi_upper,
                        double soft_lower, double soft_upper,
                        double hard_lower, double hard_upper);
Bounds smooth_bounds(double phi_lower, double phi_upper, double soft_lower,
                     double soft_upper, double hard_lower, double hard_upper,
                     double nu);

}  // namespace ccfunnel

#endif  // CCFUNNEL_PLANNER_H_
