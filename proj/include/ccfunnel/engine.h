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

#ifndef CCFUNNEL_ENGINE_H_
#define CCFUNNEL_ENGINE_H_

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ccfunnel/controller.h"
#include "ccfunnel/fault.h"
#include "ccfunnel/integrator.h"
#include "ccfunnel/planner.h"
#include "ccfunnel/plant.h"

namespace ccfunnel {

struct SimConfig {
  double t_end = 30.0;
  double h = 1e-3;
  Scheme scheme = Scheme::kRk4;
  int record_stride = 1;

  // Throws std::invalid_argument unless 0 < h <= 0.01, t_end > 0 and
  // record_stride >= 1.
  void validate() const;
  // Number of integrator steps covering [0, t_end].
  long long steps() const;
};

// Everything the engine needs to integrate one closed loop.
struct ClosedLoop {
  std::shared_ptr<const PlantModel> plant;
  Eigen::VectorXd initial_state;
  std::vector<ConstraintPair> constraints;
  PlannerConfig planner;
  ControllerConfig controller;
  // Probe hook for tests: when set, this input drives the plant and the
  // controller is not evaluated (its trace columns are NaN).
  std::function<Eigen::VectorXd(double)> open_loop_input;

  int outputs() const { return plant ? plant->output_dim() : 0; }
};

// One recorded instant. Every vector has one entry per output.
struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd x, v, v_d, e_v, u, x_hat, ev_hat;
  Eigen::VectorXd phi_lower, phi_upper, rho_lower, rho_upper;
  Eigen::VectorXd soft_lower, soft_upper, hard_lower, hard_upper, gamma_v;
};

struct SimTrace {
  int outputs = 0;
  std::vector<TraceRow> rows;
  std::vector<Fault> faults;

  bool ok() const { return faults.empty(); }
};

// Evaluates the algebraic part of the loop (planner bounds, controller) at a
// given augmented state. Throws FaultError.
TraceRow evaluate_row(const ClosedLoop& loop, double t,
                      const Eigen::VectorXd& augmented_state);

// Augmented state [plant state; phi_lower; phi_upper] at t = 0.
Eigen::VectorXd initial_augmented_state(const ClosedLoop& loop);

SimTrace simulate(const ClosedLoop& loop, const SimConfig& config);

// Explicit Euler with a very small step; a structurally simpler
// integration of the same interconnection, for tests.
inline constexpr double kOracleStep = 1e-5;
SimTrace oracle_simulate(const ClosedLoop& loop, double t_end,
                         int record_stride = 100, double h = kOracleStep);

struct BatchJob {
  ClosedLoop loop;
  SimConfig config;
};

// Runs independent jobs on up to `threads` workers (0 = hardware
// concurrency). Results are in job order.
std::vector<SimTrace> simulate_batch(std::span<const BatchJob> jobs,
                                     unsigned threads = 0);

}  // namespace ccfunnel

#endif  // CCFUNNEL_ENGINE_H_
