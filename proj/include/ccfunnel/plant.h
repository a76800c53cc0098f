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

#ifndef CCFUNNEL_PLANT_H_
#define CCFUNNEL_PLANT_H_

#include <Eigen/Core>
#include <array>
#include <functional>
#include <vector>

#include "ccfunnel/signal.h"

namespace ccfunnel {

// What the engine integrates: an opaque state with a controlled output x and
// its rate v = dx/dt.
class PlantModel {
 public:
  struct Outputs {
    Eigen::VectorXd x;
    Eigen::VectorXd v;
  };

  virtual ~PlantModel() = default;

  virtual int output_dim() const = 0;
  virtual int state_dim() const = 0;
  virtual Outputs outputs(const Eigen::VectorXd& state) const = 0;
  virtual Eigen::VectorXd state_derivative(double t,
                                           const Eigen::VectorXd& state,
                                           const Eigen::VectorXd& u) const = 0;
};

// Euler-Lagrange plant in output coordinates,
//   M(x) dv/dt + C(x, v) v + g(x) + D(x) v = u + d(t),
// with state [x; v]. Unset terms are zero; an unset mass is the identity.
struct ELTerms {
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> mass;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      coriolis;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gravity;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> damping;
  std::function<Eigen::VectorXd(double)> disturbance;
};

class ELPlant final : public PlantModel {
 public:
  ELPlant(int dim, ELTerms terms);

  int output_dim() const override { return dim_; }
  int state_dim() const override { return 2 * dim_; }
  Outputs outputs(const Eigen::VectorXd& state) const override;
  Eigen::VectorXd state_derivative(double t, const Eigen::VectorXd& state,
                                   const Eigen::VectorXd& u) const override;

  // dv/dt. Throws FaultError(kSingularConfiguration) if M(x) is not
  // positive definite.
  Eigen::VectorXd accel(double t, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& v,
                        const Eigen::VectorXd& u) const;

  static Eigen::VectorXd make_state(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& v);

 private:
  int dim_;
  ELTerms terms_;
};

ELPlant double_integrator(int dim);

// Decoupled masses with linear damping and additive disturbances.
ELPlant point_mass(const Eigen::VectorXd& mass, const Eigen::VectorXd& damping,
                   std::vector<TimeSignal> disturbance);

struct MobileRobotParams {
  double mass = 10.0;
  double inertia = 1.0;
  Eigen::Matrix2d damping = Eigen::Vector2d(0.5, 0.5).asDiagonal();
  double hand_offset = 0.2;
  std::array<TimeSignal, 2> disturbance;

  // Throws std::invalid_argument unless mass, inertia and hand_offset are > 0.
  void validate() const;
};

// Nonholonomic unicycle with dynamics on (v_T, theta_dot), controlled
// through the hand point p = (x_c, y_c) + L (cos theta, sin theta).
//
// Native state: (x_c, y_c, theta, v_T, theta_dot). Outputs are the hand
// position and velocity; inputs are hand-point forces u, applied to the
// robot as u_bar = J(theta)^T u.
class MobileRobot final : public PlantModel {
 public:
  explicit MobileRobot(MobileRobotParams params);

  const MobileRobotParams& params() const { return params_; }

  int output_dim() const override { return 2; }
  int state_dim() const override { return 5; }
  Outputs outputs(const Eigen::VectorXd& state) const override;
  Eigen::VectorXd state_derivative(double t, const Eigen::VectorXd& state,
                                   const Eigen::VectorXd& u) const override;

  // Native state whose hand point is `hand` with heading theta and body
  // velocities psi.
  Eigen::VectorXd state_from_hand(const Eigen::Vector2d& hand, double theta,
                                  const Eigen::Vector2d& psi) const;

  // pose = (x_c, y_c, theta).
  Eigen::Vector2d hand_position(const Eigen::Vector3d& pose) const;
  // dp/dt = J(theta) psi; det J = L.
  Eigen::Matrix2d jacobian(double theta) const;
  Eigen::Matrix2d jacobian_dot(double theta, double theta_dot) const;
  Eigen::Vector2d input_back_transform(const Eigen::Vector2d& u,
                                       double theta) const;
  Eigen::Vector2d disturbance(double t) const;

  // d psi / dt under body-frame input u_bar.
  Eigen::Vector2d body_accel(double t, const Eigen::Vector2d& psi,
                             const Eigen::Vector2d& u_bar) const;

  // The same robot written as an Euler-Lagrange system in hand coordinates:
  // M = J^-T M_bar J^-1, C = -J^-T M_bar J^-1 J_dot J^-1, D = J^-T D_bar J^-1,
  // d = J^-T d_bar. These depend on heading, which the hand coordinates do
  // not determine, so callers supply it.
  Eigen::Matrix2d hand_mass(double theta) const;
  Eigen::Matrix2d hand_coriolis(double theta, double theta_dot) const;
  Eigen::Matrix2d hand_damping(double theta) const;
  Eigen::Vector2d hand_disturbance(double t, double theta) const;
  // d^2 p / dt^2 from the hand-coordinate form.
  Eigen::Vector2d hand_accel(double t, double theta,
                             const Eigen::Vector2d& p_dot,
                             const Eigen::Vector2d& u) const;

 private:
  Eigen::Matrix2d jacobian_inverse(double theta) const;

  MobileRobotParams params_;
  Eigen::Matrix2d body_mass_;
};

// Disturbance of the bundled robot scenario, as sums of cosines:
//   d1 = 0.75 sin(2t + pi/3) + 1.5 cos(3t + 3pi/7)
//   d2 = 0.25 cos(3t + pi/6) + 0.75 sin(5t - pi/3)
std::array<TimeSignal, 2> reference_robot_disturbance();

}  // namespace ccfunnel

#endif  // CCFUNNEL_PLANT_H_
