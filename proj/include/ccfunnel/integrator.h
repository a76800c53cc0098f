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

#ifndef CCFUNNEL_INTEGRATOR_H_
#define CCFUNNEL_INTEGRATOR_H_

#include <string_view>

namespace ccfunnel {

enum class Scheme { kRk4, kEuler };

std::string_view scheme_name(Scheme scheme);
// Throws std::invalid_argument on unknown names.
Scheme parse_scheme(std::string_view name);

// One explicit fixed step of y' = f(t, y). State must support vector-space
// arithmetic (Eigen vectors do).
template <class State, class Rhs>
State euler_step(const Rhs& f, double t, const State& y, double h) {
  return y + h * f(t, y);
}

template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class State, class Rhs>
State integrate_step(Scheme scheme, const Rhs& f, double t, const State& y,
                     double h) {
  return scheme == Scheme::kRk4 ? rk4_step(f, t, y, h)
                                : euler_step(f, t, y, h);
}

}  // namespace ccfunnel

#endif  // CCFUNNEL_INTEGRATOR_H_
