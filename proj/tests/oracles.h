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

// Independent reference computations shared by unit and acceptance tests.

#ifndef CCFUNNEL_TESTS_ORACLES_H_
#define CCFUNNEL_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>

#include "ccfunnel/integrator.h"
#include "ccfunnel/plant.h"

namespace ccfunnel::testing {

// Integrates the robot twice for `seconds` under the same open-loop hand
// input: natively in (x_c, y_c, theta, v_T, omega) and directly in the
// hand-coordinate Euler-Lagrange form (p, p_dot, theta). Returns the sup-norm
// difference of hand position and velocity.
inline double transform_equivalence_error(double seconds, double h = 1e-3) {
  MobileRobotParams params;
  params.disturbance = reference_robot_disturbance();
  const MobileRobot robot(params);
  auto input = [](double t) {
    return Eigen::Vector2d(2.0 * std::sin(0.7 * t) + 0.5,
                           1.5 * std::cos(1.1 * t));
  };
  const double theta0 = -0.33;
  const Eigen::Vector2d psi0(0.2, -0.1);
  Eigen::VectorXd native = robot.state_from_hand({-3.19, 1.70}, theta0, psi0);
  auto native_rhs = [&](double t, const Eigen::VectorXd& s) {
    return robot.state_derivative(t, s, input(t));
  };

  Eigen::VectorXd hand(5);
  const Eigen::Vector2d p_dot0 = robot.jacobian(theta0) * psi0;
  hand << -3.19, 1.70, p_dot0[0], p_dot0[1], theta0;
  const double offset = params.hand_offset;
  auto hand_rhs = [&](double t, const Eigen::VectorXd& s) {
    const double th = s[4];
    const Eigen::Vector2d pd = s.segment<2>(2);
    Eigen::VectorXd ds(5);
    ds.head<2>() = pd;
    ds.segment<2>(2) = robot.hand_accel(t, th, pd, input(t));
    // omega from the second row of J^-1.
    ds[4] = (-std::sin(th) * pd[0] + std::cos(th) * pd[1]) / offset;
    return ds;
  };

  const auto steps = static_cast<long long>(std::llround(seconds / h));
  double worst = 0;
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    native = rk4_step(native_rhs, t, native, h);
    hand = rk4_step(hand_rhs, t, hand, h);
    const auto out = robot.outputs(native);
    worst = std::max(worst, (out.x - hand.head<2>()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (out.v - hand.segment<2>(2)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ccfunnel::testing

#endif  // CCFUNNEL_TESTS_ORACLES_H_
