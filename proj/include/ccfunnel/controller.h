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

// Low-complexity prescribed-performance controller.
//
// Two static feedback maps, evaluated in sequence:
//   1. velocity reference: v_d = -k_x * xi_x * T(x_hat), where x_hat is the
//      output normalized to the (asymmetric) planned funnel;
//   2. control input: u = -k_v * xi_v * T(ev_hat), where ev_hat is the
//      velocity error v - v_d normalized by its envelope gamma_v(t).
// T(z) = ln((1 + z) / (1 - z)) acts as a barrier at the funnel edges.
// Nothing here reads plant parameters.

#ifndef CCFUNNEL_CONTROLLER_H_
#define CCFUNNEL_CONTROLLER_H_

#include <Eigen/Core>
#include <vector>

#include "ccfunnel/signal.h"

namespace ccfunnel {

// Normalized values within this distance of +-1 are treated as a funnel
// violation.
inline constexpr double kFunnelEdgeTolerance = 1e-9;

struct ControllerConfig {
  double k_x = 0.2;
  double k_v = 3.0;
  std::vector<TimeSignal> gamma_v;

  // Throws std::invalid_argument for non-positive gains.
  void validate() const;
};

struct FunnelBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct ControllerOutput {
  Eigen::VectorXd x_hat;
  Eigen::VectorXd eps_x;
  Eigen::VectorXd v_d;
  Eigen::VectorXd e_v;
  Eigen::VectorXd ev_hat;
  Eigen::VectorXd eps_v;
  Eigen::VectorXd u;
};

// (x - mid) / half_width. Throws FaultError(kFunnelViolation) if the result
// is within kFunnelEdgeTolerance of +-1 or beyond, or if rho_upper <=
// rho_lower.
double normalize_output(double x, double rho_lower, double rho_upper);

// ln((1 + z) / (1 - z)). Throws FaultError(kDomain) unless |z| < 1.
double transform(double z);
// (e^w - 1) / (e^w + 1), i.e. tanh(w / 2).
double inverse_transform(double w);

Eigen::VectorXd velocity_reference(const Eigen::VectorXd& x,
                                   const FunnelBounds& bounds, double k_x);

Eigen::VectorXd control_input(const Eigen::VectorXd& e_v,
                              const Eigen::VectorXd& gamma_v, double k_v);

// Full cascade at time t. Faults carry t and the offending output index.
ControllerOutput controller_step(double t, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v,
                                 const FunnelBounds& bounds,
                                 const ControllerConfig& cfg);

}  // namespace ccfunnel

#endif  // CCFUNNEL_CONTROLLER_H_
