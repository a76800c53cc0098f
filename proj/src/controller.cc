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

#include "ccfunnel/controller.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ccfunnel/fault.h"

namespace ccfunnel {
namespace {

constexpr double kNoTime = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void raise(FaultKind kind, int index, const std::string& msg) {
  throw FaultError({kind, kNoTime, index, msg});
}

double normalize_velocity_error(double e_v, double gamma, int index) {
  if (!(gamma > 0.0)) {
    std::ostringstream msg;
    msg << "velocity envelope " << gamma << " is not positive";
    raise(FaultKind::kVelocityFunnelViolation, index, msg.str());
  }
  const double z = e_v / gamma;
  if (!(std::abs(z) < 1.0 - kFunnelEdgeTolerance)) {
    std::ostringstream msg;
    msg << "velocity error " << e_v << " outside envelope +-" << gamma;
    raise(FaultKind::kVelocityFunnelViolation, index, msg.str());
  }
  return z;
}

struct Component {
  double normalized;
  double transformed;
  double command;
};

Component velocity_component(double x, double lo, double hi, double k_x) {
  const double z = normalize_output(x, lo, hi);
  const double xi = 4.0 / ((hi - lo) * (1.0 - z * z));
  const double eps = transform(z);
  return {z, eps, -k_x * xi * eps};
}

Component input_component(double e_v, double gamma, double k_v, int index) {
  const double z = normalize_velocity_error(e_v, gamma, index);
  const double xi = 2.0 / (gamma * (1.0 - z * z));
  const double eps = transform(z);
  return {z, eps, -k_v * xi * eps};
}

template <class Fn>
auto with_index(int index, Fn&& fn) {
  try {
    return fn();
  } catch (FaultError& e) {
    Fault f = e.fault();
    f.index = index;
    throw FaultError(std::move(f));
  }
}

}  // namespace

void ControllerConfig::validate() const {
  if (!(k_x > 0.0)) throw std::invalid_argument("controller: k_x must be > 0");
  if (!(k_v > 0.0)) throw std::invalid_argument("controller: k_v must be > 0");
}

double normalize_output(double x, double rho_lower, double rho_upper) {
  if (!(rho_upper > rho_lower)) {
    std::ostringstream msg;
    msg << "empty funnel (" << rho_lower << ", " << rho_upper << ")";
    raise(FaultKind::kFunnelViolation, -1, msg.str());
  }
  const double z =
      (x - 0.5 * (rho_upper + rho_lower)) / (0.5 * (rho_upper - rho_lower));
  if (!(std::abs(z) < 1.0 - kFunnelEdgeTolerance)) {
    std::ostringstream msg;
    msg << "output " << x << " outside funnel (" << rho_lower << ", "
        << rho_upper << ")";
    raise(FaultKind::kFunnelViolation, -1, msg.str());
  }
  return z;
}

double transform(double z) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream msg;
    msg << "transform argument " << z << " outside (-1, 1)";
    raise(FaultKind::kDomain, -1, msg.str());
  }
  return 2.0 * std::atanh(z);
}

double inverse_transform(double w) { return std::tanh(0.5 * w); }

Eigen::VectorXd velocity_reference(const Eigen::VectorXd& x,
                                   const FunnelBounds& bounds, double k_x) {
  Eigen::VectorXd v_d(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    v_d[i] = with_index(static_cast<int>(i), [&] {
      return velocity_component(x[i], bounds.lower[i], bounds.upper[i], k_x)
          .command;
    });
  }
  return v_d;
}

Eigen::VectorXd control_input(const Eigen::VectorXd& e_v,
                              const Eigen::VectorXd& gamma_v, double k_v) {
  Eigen::VectorXd u(e_v.size());
  for (Eigen::Index i = 0; i < e_v.size(); ++i) {
    u[i] = input_component(e_v[i], gamma_v[i], k_v, static_cast<int>(i))
               .command;
  }
  return u;
}

ControllerOutput controller_step(double t, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v,
                                 const FunnelBounds& bounds,
                                 const ControllerConfig& cfg) {
  const Eigen::Index n = x.size();
  ControllerOutput out;
  out.x_hat.resize(n);
  out.eps_x.resize(n);
  out.v_d.resize(n);
  out.e_v.resize(n);
  out.ev_hat.resize(n);
  out.eps_v.resize(n);
  out.u.resize(n);
  try {
    for (Eigen::Index i = 0; i < n; ++i) {
      const int idx = static_cast<int>(i);
      const Component c = with_index(idx, [&] {
        return velocity_component(x[i], bounds.lower[i], bounds.upper[i],
                                  cfg.k_x);
      });
      out.x_hat[i] = c.normalized;
      out.eps_x[i] = c.transformed;
      out.v_d[i] = c.command;
      out.e_v[i] = v[i] - c.command;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const Component c =
          input_component(out.e_v[i], cfg.gamma_v[i].value(t), cfg.k_v,
                          static_cast<int>(i));
      out.ev_hat[i] = c.normalized;
      out.eps_v[i] = c.transformed;
      out.u[i] = c.command;
    }
  } catch (FaultError& e) {
    Fault f = e.fault();
    f.time = t;
    throw FaultError(std::move(f));
  }
  return out;
}

}  // namespace ccfunnel
