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

#include "ccfunnel/signal.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ccfunnel {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

TimeSignal::TimeSignal() : TimeSignal(Constant{0.0}) {}

TimeSignal::TimeSignal(Node node)
    : node_(std::make_shared<const Node>(std::move(node))) {}

TimeSignal TimeSignal::constant(double value) {
  return TimeSignal(Constant{value});
}

TimeSignal TimeSignal::sinusoid(double amplitude, double omega, double phase,
                                double offset) {
  return TimeSignal(Sinusoid{amplitude, omega, phase, offset});
}

TimeSignal TimeSignal::exp_envelope(double rho0, double rho_inf, double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("exp_envelope: decay rate must be > 0");
  }
  return TimeSignal(ExpEnvelope{rho0, rho_inf, rate});
}

TimeSignal TimeSignal::sum(std::vector<TimeSignal> terms) {
  return TimeSignal(Sum{std::move(terms)});
}

TimeSignal TimeSignal::scaled(double coefficient, TimeSignal signal) {
  return TimeSignal(Scaled{coefficient, {std::move(signal)}});
}

double TimeSignal::value(double t) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [t](const Sinusoid& s) {
            return s.amplitude * std::cos(s.omega * t + s.phase) + s.offset;
          },
          [t](const ExpEnvelope& e) {
            return (e.rho0 - e.rho_inf) * std::exp(-e.rate * t) + e.rho_inf;
          },
          [t](const Sum& s) {
            double acc = 0.0;
            for (const auto& term : s.terms) acc += term.value(t);
            return acc;
          },
          [t](const Scaled& s) {
            return s.coefficient * s.inner.front().value(t);
          },
      },
      *node_);
}

double TimeSignal::derivative(double t) const {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 0.0; },
          [t](const Sinusoid& s) {
            return -s.amplitude * s.omega * std::sin(s.omega * t + s.phase);
          },
          [t](const ExpEnvelope& e) {
            return -e.rate * (e.rho0 - e.rho_inf) * std::exp(-e.rate * t);
          },
          [t](const Sum& s) {
            double acc = 0.0;
            for (const auto& term : s.terms) acc += term.derivative(t);
            return acc;
          },
          [t](const Scaled& s) {
            return s.coefficient * s.inner.front().derivative(t);
          },
      },
      *node_);
}

bool operator==(const TimeSignal& a, const TimeSignal& b) {
  if (a.node_ == b.node_) return true;
  const auto& na = *a.node_;
  const auto& nb = *b.node_;
  if (na.index() != nb.index()) return false;
  return std::visit(
      Overloaded{
          [&](const TimeSignal::Constant& x) {
            return x.value == std::get<TimeSignal::Constant>(nb).value;
          },
          [&](const TimeSignal::Sinusoid& x) {
            const auto& y = std::get<TimeSignal::Sinusoid>(nb);
            return x.amplitude == y.amplitude && x.omega == y.omega &&
                   x.phase == y.phase && x.offset == y.offset;
          },
          [&](const TimeSignal::ExpEnvelope& x) {
            const auto& y = std::get<TimeSignal::ExpEnvelope>(nb);
            return x.rho0 == y.rho0 && x.rho_inf == y.rho_inf &&
                   x.rate == y.rate;
          },
          [&](const TimeSignal::Sum& x) {
            return x.terms == std::get<TimeSignal::Sum>(nb).terms;
          },
          [&](const TimeSignal::Scaled& x) {
            const auto& y = std::get<TimeSignal::Scaled>(nb);
            return x.coefficient == y.coefficient && x.inner == y.inner;
          },
      },
      na);
}

TimeSignal operator+(const TimeSignal& a, const TimeSignal& b) {
  return TimeSignal::sum({a, b});
}

TimeSignal operator-(const TimeSignal& a, const TimeSignal& b) {
  return TimeSignal::sum({a, TimeSignal::scaled(-1.0, b)});
}

TimeSignal operator*(double coefficient, const TimeSignal& s) {
  return TimeSignal::scaled(coefficient, s);
}

}  // namespace ccfunnel
