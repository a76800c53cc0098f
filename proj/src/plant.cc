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

#include "ccfunnel/plant.h"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "ccfunnel/fault.h"

namespace ccfunnel {

ELPlant::ELPlant(int dim, ELTerms terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim <= 0) throw std::invalid_argument("ELPlant: dimension must be > 0");
}

Eigen::VectorXd ELPlant::make_state(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& v) {
  Eigen::VectorXd s(x.size() + v.size());
  s << x, v;
  return s;
}

PlantModel::Outputs ELPlant::outputs(const Eigen::VectorXd& state) const {
  return {state.head(dim_), state.tail(dim_)};
}

Eigen::VectorXd ELPlant::accel(double t, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& v,
                               const Eigen::VectorXd& u) const {
  Eigen::VectorXd rhs = u;
  if (terms_.coriolis) rhs -= terms_.coriolis(x, v) * v;
  if (terms_.gravity) rhs -= terms_.gravity(x);
  if (terms_.damping) rhs -= terms_.damping(x) * v;
  if (terms_.disturbance) rhs += terms_.disturbance(t);
  if (!terms_.mass) return rhs;
  const Eigen::LLT<Eigen::MatrixXd> llt(terms_.mass(x));
  if (llt.info() != Eigen::Success) {
    throw FaultError({FaultKind::kSingularConfiguration, t, -1,
                      "mass matrix is not positive definite"});
  }
  return llt.solve(rhs);
}

Eigen::VectorXd ELPlant::state_derivative(double t,
                                          const Eigen::VectorXd& state,
                                          const Eigen::VectorXd& u) const {
  const Eigen::VectorXd x = state.head(dim_);
  const Eigen::VectorXd v = state.tail(dim_);
  return make_state(v, accel(t, x, v, u));
}

ELPlant double_integrator(int dim) { return ELPlant(dim, ELTerms{}); }

ELPlant point_mass(const Eigen::VectorXd& mass, const Eigen::VectorXd& damping,
                   std::vector<TimeSignal> disturbance) {
  const auto n = mass.size();
  if (damping.size() != n) {
    throw std::invalid_argument("point_mass: damping size mismatch");
  }
  if (!disturbance.empty() &&
      static_cast<Eigen::Index>(disturbance.size()) != n) {
    throw std::invalid_argument("point_mass: disturbance size mismatch");
  }
  ELTerms terms;
  const Eigen::MatrixXd m = mass.asDiagonal();
  const Eigen::MatrixXd d = damping.asDiagonal();
  terms.mass = [m](const Eigen::VectorXd&) { return m; };
  terms.damping = [d](const Eigen::VectorXd&) { return d; };
  if (!disturbance.empty()) {
    terms.disturbance = [dist = std::move(disturbance)](double t) {
      Eigen::VectorXd out(static_cast<Eigen::Index>(dist.size()));
      for (std::size_t i = 0; i < dist.size(); ++i) out[i] = dist[i].value(t);
      return out;
    };
  }
  return ELPlant(static_cast<int>(n), std::move(terms));
}

void MobileRobotParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("robot: mass must be > 0");
  if (!(inertia > 0.0)) {
    throw std::invalid_argument("robot: inertia must be > 0");
  }
  if (!(hand_offset > 0.0)) {
    throw std::invalid_argument("robot: hand offset L must be > 0");
  }
}

MobileRobot::MobileRobot(MobileRobotParams params)
    : params_(std::move(params)) {
  params_.validate();
  body_mass_ = Eigen::Vector2d(params_.mass, params_.inertia).asDiagonal();
}

Eigen::Vector2d MobileRobot::hand_position(const Eigen::Vector3d& pose) const {
  const double l = params_.hand_offset;
  return {pose[0] + l * std::cos(pose[2]), pose[1] + l * std::sin(pose[2])};
}

Eigen::Matrix2d MobileRobot::jacobian(double theta) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double l = params_.hand_offset;
  Eigen::Matrix2d j;
  j << c, -l * s,  //
      s, l * c;
  return j;
}

Eigen::Matrix2d MobileRobot::jacobian_dot(double theta,
                                          double theta_dot) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double l = params_.hand_offset;
  Eigen::Matrix2d jd;
  jd << -s, -l * c,  //
      c, -l * s;
  return theta_dot * jd;
}

Eigen::Matrix2d MobileRobot::jacobian_inverse(double theta) const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double l = params_.hand_offset;
  Eigen::Matrix2d ji;
  ji << c, s,  //
      -s / l, c / l;
  return ji;
}

Eigen::Vector2d MobileRobot::input_back_transform(const Eigen::Vector2d& u,
                                                  double theta) const {
  return jacobian(theta).transpose() * u;
}

Eigen::Vector2d MobileRobot::disturbance(double t) const {
  return {params_.disturbance[0].value(t), params_.disturbance[1].value(t)};
}

Eigen::Vector2d MobileRobot::body_accel(double t, const Eigen::Vector2d& psi,
                                        const Eigen::Vector2d& u_bar) const {
  const Eigen::Vector2d force = u_bar + disturbance(t) - params_.damping * psi;
  return {force[0] / params_.mass, force[1] / params_.inertia};
}

Eigen::VectorXd MobileRobot::state_from_hand(const Eigen::Vector2d& hand,
                                             double theta,
                                             const Eigen::Vector2d& psi) const {
  const double l = params_.hand_offset;
  Eigen::VectorXd s(5);
  s << hand[0] - l * std::cos(theta), hand[1] - l * std::sin(theta), theta,
      psi[0], psi[1];
  return s;
}

PlantModel::Outputs MobileRobot::outputs(const Eigen::VectorXd& state) const {
  const Eigen::Vector3d pose = state.head<3>();
  const Eigen::Vector2d psi = state.tail<2>();
  return {hand_position(pose), jacobian(pose[2]) * psi};
}

Eigen::VectorXd MobileRobot::state_derivative(double t,
                                              const Eigen::VectorXd& state,
                                              const Eigen::VectorXd& u) const {
  const double theta = state[2];
  const Eigen::Vector2d psi = state.tail<2>();
  const Eigen::Vector2d psi_dot =
      body_accel(t, psi, input_back_transform(u, theta));
  Eigen::VectorXd ds(5);
  ds << psi[0] * std::cos(theta), psi[0] * std::sin(theta), psi[1],
      psi_dot[0], psi_dot[1];
  return ds;
}

Eigen::Matrix2d MobileRobot::hand_mass(double theta) const {
  const Eigen::Matrix2d ji = jacobian_inverse(theta);
  return ji.transpose() * body_mass_ * ji;
}

Eigen::Matrix2d MobileRobot::hand_coriolis(double theta,
                                           double theta_dot) const {
  const Eigen::Matrix2d ji = jacobian_inverse(theta);
  return -ji.transpose() * body_mass_ * ji * jacobian_dot(theta, theta_dot) *
         ji;
}

Eigen::Matrix2d MobileRobot::hand_damping(double theta) const {
  const Eigen::Matrix2d ji = jacobian_inverse(theta);
  return ji.transpose() * params_.damping * ji;
}

Eigen::Vector2d MobileRobot::hand_disturbance(double t, double theta) const {
  return jacobian_inverse(theta).transpose() * disturbance(t);
}

Eigen::Vector2d MobileRobot::hand_accel(double t, double theta,
                                        const Eigen::Vector2d& p_dot,
                                        const Eigen::Vector2d& u) const {
  const double theta_dot = (jacobian_inverse(theta) * p_dot)[1];
  const Eigen::Vector2d rhs = -hand_coriolis(theta, theta_dot) * p_dot -
                              hand_damping(theta) * p_dot + u +
                              hand_disturbance(t, theta);
  return hand_mass(theta).llt().solve(rhs);
}

std::array<TimeSignal, 2> reference_robot_disturbance() {
  constexpr double pi = std::numbers::pi;
  // sin(a) = cos(a - pi/2)
  return {
      TimeSignal::sum({TimeSignal::sinusoid(0.75, 2.0, pi / 3 - pi / 2, 0.0),
                       TimeSignal::sinusoid(1.5, 3.0, 3 * pi / 7, 0.0)}),
      TimeSignal::sum({TimeSignal::sinusoid(0.25, 3.0, pi / 6, 0.0),
                       TimeSignal::sinusoid(0.75, 5.0, -pi / 3 - pi / 2, 0.0)}),
  };
}

}  // namespace ccfunnel
