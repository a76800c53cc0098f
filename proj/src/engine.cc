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

#include "ccfunnel/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace ccfunnel {
namespace {

void check_finite(const char* name, const Eigen::VectorXd& values, double t) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << name << "[" << i << "] = " << values[i];
      throw FaultError(
          {FaultKind::kNonFinite, t, static_cast<int>(i), msg.str()});
    }
  }
}

// Algebraic quantities at one stage of the augmented system.
struct Stage {
  PlantModel::Outputs out;
  FunnelBounds bounds;
  ControllerOutput control;
};

Stage evaluate_stage(const ClosedLoop& loop, double t,
                     const Eigen::VectorXd& y) {
  const int n = loop.outputs();
  const int ps = loop.plant->state_dim();
  Stage s;
  s.out = loop.plant->outputs(y.head(ps));
  check_finite("x", s.out.x, t);
  check_finite("v", s.out.v, t);
  s.bounds.lower.resize(n);
  s.bounds.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    const Bounds b = funnel_bounds(y[ps + i], y[ps + n + i],
                                   loop.constraints[i], loop.planner, t);
    s.bounds.lower[i] = b.lower;
    s.bounds.upper[i] = b.upper;
  }
  check_finite("rho_lower", s.bounds.lower, t);
  check_finite("rho_upper", s.bounds.upper, t);
  if (loop.open_loop_input) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Eigen::VectorXd blank = Eigen::VectorXd::Constant(n, nan);
    s.control = {blank, blank, blank, blank, blank, blank,
                 loop.open_loop_input(t)};
  } else {
    s.control =
        controller_step(t, s.out.x, s.out.v, s.bounds, loop.controller);
  }
  check_finite("u", s.control.u, t);
  return s;
}

Eigen::VectorXd augmented_rhs(const ClosedLoop& loop, double t,
                              const Eigen::VectorXd& y) {
  const int n = loop.outputs();
  const int ps = loop.plant->state_dim();
  const Stage s = evaluate_stage(loop, t, y);
  Eigen::VectorXd dy(ps + 2 * n);
  dy.head(ps) = loop.plant->state_derivative(t, y.head(ps), s.control.u);
  try {
    planner_rates(loop.constraints, loop.planner, t,
                  {y.data() + ps, std::size_t(n)},
                  {y.data() + ps + n, std::size_t(n)},
                  {dy.data() + ps, std::size_t(n)},
                  {dy.data() + ps + n, std::size_t(n)});
  } catch (FaultError& e) {
    Fault f = e.fault();
    f.time = t;
    throw FaultError(std::move(f));
  }
  check_finite("state_rate", dy, t);
  return dy;
}

SimTrace run(const ClosedLoop& loop, double h, Scheme scheme, int stride,
             long long steps) {
  SimTrace trace;
  trace.outputs = loop.outputs();
  const int n = loop.outputs();
  const int ps = loop.plant->state_dim();
  trace.rows.reserve(static_cast<std::size_t>(steps / stride + 1));

  Eigen::VectorXd y = initial_augmented_state(loop);
  auto rhs = [&loop](double t, const Eigen::VectorXd& state) {
    return augmented_rhs(loop, t, state);
  };
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    try {
      if (k % stride == 0) trace.rows.push_back(evaluate_row(loop, t, y));
      if (k == steps) break;
      y = integrate_step(scheme, rhs, t, y, h);
      for (int i = 0; i < 2 * n; ++i) y[ps + i] = std::max(y[ps + i], 0.0);
      check_finite("state", y, t + h);
    } catch (FaultError& e) {
      Fault f = e.fault();
      if (std::isnan(f.time)) f.time = t;
      trace.faults.push_back(std::move(f));
      break;
    }
  }
  return trace;
}

}  // namespace

void SimConfig::validate() const {
  if (!(h > 0.0 && h <= 0.01)) {
    throw std::invalid_argument("sim: step h must satisfy 0 < h <= 0.01");
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("sim: t_end must be > 0");
  if (record_stride < 1) {
    throw std::invalid_argument("sim: record_stride must be >= 1");
  }
}

long long SimConfig::steps() const {
  return static_cast<long long>(std::floor(t_end / h + 1e-9));
}

Eigen::VectorXd initial_augmented_state(const ClosedLoop& loop) {
  const int ps = loop.plant->state_dim();
  if (loop.initial_state.size() != ps) {
    throw std::invalid_argument("initial state has wrong dimension");
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(ps + 2 * loop.outputs());
  y.head(ps) = loop.initial_state;
  return y;
}

TraceRow evaluate_row(const ClosedLoop& loop, double t,
                      const Eigen::VectorXd& y) {
  const int n = loop.outputs();
  const int ps = loop.plant->state_dim();
  const Stage s = evaluate_stage(loop, t, y);
  TraceRow row;
  row.t = t;
  row.x = s.out.x;
  row.v = s.out.v;
  row.v_d = s.control.v_d;
  row.e_v = s.control.e_v;
  row.u = s.control.u;
  row.x_hat = s.control.x_hat;
  row.ev_hat = s.control.ev_hat;
  row.phi_lower = y.segment(ps, n);
  row.phi_upper = y.segment(ps + n, n);
  row.rho_lower = s.bounds.lower;
  row.rho_upper = s.bounds.upper;
  row.soft_lower.resize(n);
  row.soft_upper.resize(n);
  row.hard_lower.resize(n);
  row.hard_upper.resize(n);
  row.gamma_v.resize(n);
  for (int i = 0; i < n; ++i) {
    const ConstraintPair& c = loop.constraints[i];
    row.soft_lower[i] = c.soft_lower.value(t);
    row.soft_upper[i] = c.soft_upper.value(t);
    row.hard_lower[i] = c.hard_lower.value(t);
    row.hard_upper[i] = c.hard_upper.value(t);
    row.gamma_v[i] = loop.controller.gamma_v[i].value(t);
  }
  return row;
}

namespace {

void check_loop(const ClosedLoop& loop) {
  if (!loop.plant) throw std::invalid_argument("closed loop has no plant");
  const auto n = static_cast<std::size_t>(loop.outputs());
  if (loop.constraints.size() != n) {
    throw std::invalid_argument("constraint count != plant output dimension");
  }
  if (loop.controller.gamma_v.size() != n) {
    throw std::invalid_argument(
        "velocity envelope count != plant output dimension");
  }
  loop.planner.validate();
  loop.controller.validate();
}

}  // namespace

SimTrace simulate(const ClosedLoop& loop, const SimConfig& config) {
  config.validate();
  check_loop(loop);
  return run(loop, config.h, config.scheme, config.record_stride,
             config.steps());
}

SimTrace oracle_simulate(const ClosedLoop& loop, double t_end,
                         int record_stride, double h) {
  check_loop(loop);
  if (!(h > 0.0) || !(t_end > 0.0) || record_stride < 1) {
    throw std::invalid_argument("oracle_simulate: bad step configuration");
  }
  const auto steps = static_cast<long long>(std::floor(t_end / h + 1e-9));
  return run(loop, h, Scheme::kEuler, record_stride, steps);
}

std::vector<SimTrace> simulate_batch(std::span<const BatchJob> jobs,
                                     unsigned threads) {
  std::vector<SimTrace> results(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = simulate(jobs[j].loop, jobs[j].config);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace ccfunnel
