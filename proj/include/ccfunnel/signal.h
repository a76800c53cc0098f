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

#ifndef CCFUNNEL_SIGNAL_H_
#define CCFUNNEL_SIGNAL_H_

#include <memory>
#include <variant>
#include <vector>

namespace ccfunnel {

// A scalar function of time with an exact first derivative.
//
// Signals are immutable values. Copies share the underlying node, so
// composing large sums is cheap and evaluation is reentrant.
class TimeSignal {
 public:
  struct Constant {
    double value = 0.0;
  };
  // amplitude * cos(omega * t + phase) + offset
  struct Sinusoid {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    double offset = 0.0;
  };
  // (rho0 - rho_inf) * exp(-rate * t) + rho_inf, rate > 0
  struct ExpEnvelope {
    double rho0 = 1.0;
    double rho_inf = 1.0;
    double rate = 1.0;
  };
  struct Sum {
    std::vector<TimeSignal> terms;
  };
  struct Scaled {
    double coefficient = 1.0;
    std::vector<TimeSignal> inner;  // exactly one element
  };
  using Node = std::variant<Constant, Sinusoid, ExpEnvelope, Sum, Scaled>;

  // Zero signal.
  TimeSignal();

  static TimeSignal constant(double value);
  static TimeSignal sinusoid(double amplitude, double omega, double phase,
                             double offset);
  // Throws std::invalid_argument unless rate > 0.
  static TimeSignal exp_envelope(double rho0, double rho_inf, double rate);
  static TimeSignal sum(std::vector<TimeSignal> terms);
  static TimeSignal scaled(double coefficient, TimeSignal signal);

  double value(double t) const;
  double derivative(double t) const;

  const Node& node() const { return *node_; }

  // Structural equality; two signals built the same way compare equal.
  friend bool operator==(const TimeSignal& a, const TimeSignal& b);

 private:
  explicit TimeSignal(Node node);

  std::shared_ptr<const Node> node_;
};

TimeSignal operator+(const TimeSignal& a, const TimeSignal& b);
TimeSignal operator-(const TimeSignal& a, const TimeSignal& b);
TimeSignal operator*(double coefficient, const TimeSignal& s);

}  // namespace ccfunnel

#endif  // CCFUNNEL_SIGNAL_H_
