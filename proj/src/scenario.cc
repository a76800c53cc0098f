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

#include "ccfunnel/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "ccfunnel/controller.h"

namespace ccfunnel {

using config::Block;
using config::Value;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Typed access to one block with path-qualified error messages.
class Reader {
 public:
  Reader(const Block& block, std::string path)
      : block_(block), path_(std::move(path)) {}

  [[noreturn]] void fail(int line, const std::string& key,
                         const std::string& msg) const {
    throw ScenarioError(line, qualified(key) + ": " + msg);
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return block_.find(key); }

  const Value& value(const std::string& key) const {
    const Value* v = block_.find(key);
    if (!v) fail(block_.line, key, "missing required entry");
    return *v;
  }

  double number(const std::string& key) const {
    const Value& v = value(key);
    if (!v.is_number()) fail(v.line, key, "expected a number");
    return std::get<double>(v.data);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string word(const std::string& key) const {
    const Value& v = value(key);
    if (!v.is_word()) fail(v.line, key, "expected a word");
    return std::get<std::string>(v.data);
  }

  std::vector<double> numbers(const std::string& key) const {
    const Value& v = value(key);
    return numbers_of(v, key);
  }

  std::vector<double> numbers_of(const Value& v, const std::string& key) const {
    if (!v.is_list()) fail(v.line, key, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : std::get<config::List>(v.data).items) {
      if (!item.is_number()) fail(item.line, key, "expected a number");
      out.push_back(std::get<double>(item.data));
    }
    return out;
  }

  Reader sub(const std::string& key) const {
    const Value& v = value(key);
    if (!v.is_block()) fail(v.line, key, "expected a '{ ... }' section");
    return Reader(std::get<Block>(v.data), qualified(key));
  }

  const Block& block() const { return block_; }
  int line() const { return block_.line; }

 private:
  const Block& block_;
  std::string path_;
};

Value num(double v) { return config::number(v); }

Value nums(const std::vector<double>& v) {
  std::vector<Value> items;
  for (double d : v) items.push_back(num(d));
  return config::list(std::move(items));
}

void record_lines(const Block& b, const std::string& prefix,
                  std::map<std::string, int>& lines) {
  if (!prefix.empty()) lines[prefix] = b.line;
  for (const auto& e : b.entries) {
    const std::string path = prefix.empty() ? e.key : prefix + "." + e.key;
    lines[path] = e.value.line;
    if (const auto* inner = std::get_if<Block>(&e.value.data)) {
      record_lines(*inner, path, lines);
    }
  }
}

std::string output_key(int i) { return "output_" + std::to_string(i + 1); }

std::vector<double> sample_times(const Scenario& s) {
  const double dt = std::min(s.sim.h > 0.0 ? s.sim.h : 1e-3, 1e-2);
  const auto n = static_cast<long long>(std::floor(s.sim.t_end / dt + 1e-9));
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(std::max(0LL, n) + 1));
  for (long long k = 0; k <= n; ++k) ts.push_back(static_cast<double>(k) * dt);
  return ts;
}

std::shared_ptr<const PlantModel> make_plant(const Scenario& s) {
  if (const auto* robot = std::get_if<MobileRobotParams>(&s.plant)) {
    return std::make_shared<MobileRobot>(*robot);
  }
  const auto& pm = std::get<PointMassSpec>(s.plant);
  return std::make_shared<ELPlant>(
      point_mass(Eigen::Map<const Eigen::VectorXd>(
                     pm.mass.data(), static_cast<Eigen::Index>(pm.mass.size())),
                 Eigen::Map<const Eigen::VectorXd>(
                     pm.damping.data(),
                     static_cast<Eigen::Index>(pm.damping.size())),
                 pm.disturbance));
}

Eigen::VectorXd make_initial_state(const Scenario& s, const PlantModel& plant) {
  if (const auto* robot = dynamic_cast<const MobileRobot*>(&plant)) {
    return robot->state_from_hand({s.x0[0], s.x0[1]}, s.theta0,
                                  {s.psi0[0], s.psi0[1]});
  }
  Eigen::VectorXd y(2 * s.outputs);
  for (int i = 0; i < s.outputs; ++i) {
    y[i] = s.x0[i];
    y[s.outputs + i] = s.v0[i];
  }
  return y;
}

// Structural and sign checks. Anything reported here makes the later,
// simulation-level checks meaningless.
void check_parameters(const Scenario& s, std::vector<ValidationIssue>& out) {
  auto issue = [&](const std::string& path, const std::string& msg) {
    out.push_back({"parameters", msg, kNaN, -1, s.line_of(path)});
  };
  auto guard = [&](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      issue(path, e.what());
    }
  };
  const auto n = static_cast<std::size_t>(s.outputs);
  if (s.outputs <= 0) issue("outputs", "outputs must be >= 1");
  if (s.constraints.size() != n) {
    issue("constraints", "expected " + std::to_string(n) +
                             " constraint sections, found " +
                             std::to_string(s.constraints.size()));
  }
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto& c = s.constraints[i];
    if (!(c.eps_hard > 0.0) || !(c.eps_soft > 0.0)) {
      issue("constraints." + output_key(static_cast<int>(i)),
            "eps_hard and eps_soft must be > 0");
    }
  }
  guard("planner", [&] { s.planner.validate(); });
  if (!(s.k_x > 0.0)) issue("controller.k_x", "k_x must be > 0");
  if (!(s.k_v > 0.0)) issue("controller.k_v", "k_v must be > 0");
  const auto& ve = s.velocity_envelope;
  const std::string vpath = "controller.velocity_envelope";
  if (ve.rho_inf.size() != n || ve.rate.size() != n ||
      (ve.rho0 && ve.rho0->size() != n)) {
    issue(vpath, "envelope parameter lists need one entry per output");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(ve.rho_inf[i] > 0.0) || !(ve.rate[i] > 0.0)) {
        issue(vpath, "rho_inf and rate must be > 0");
        break;
      }
    }
    if (!ve.rho0 && !(ve.rho0_scale > 1.0)) {
      issue(vpath, "rho0_scale must be > 1");
    }
  }
  guard("sim", [&] { s.sim.validate(); });
  if (s.x0.size() != n) issue("initial.x", "x needs one entry per output");
  if (const auto* robot = std::get_if<MobileRobotParams>(&s.plant)) {
    guard("plant", [&] { robot->validate(); });
    if (n != 2) issue("outputs", "mobile_robot has exactly 2 outputs");
    if (s.psi0.size() != 2) issue("initial.psi", "psi needs 2 entries");
  } else {
    const auto& pm = std::get<PointMassSpec>(s.plant);
    if (pm.mass.size() != n || pm.damping.size() != n ||
        (!pm.disturbance.empty() && pm.disturbance.size() != n)) {
      issue("plant", "point_mass lists need one entry per output");
    }
    for (double m : pm.mass) {
      if (!(m > 0.0)) {
        issue("plant.mass", "masses must be > 0");
        break;
      }
    }
    if (s.v0.size() != n) issue("initial.v", "v needs one entry per output");
  }
}

// Initial funnel bounds with zero modification signals.
FunnelBounds initial_bounds(const Scenario& s) {
  FunnelBounds b{Eigen::VectorXd(s.outputs), Eigen::VectorXd(s.outputs)};
  for (int i = 0; i < s.outputs; ++i) {
    const Bounds r = funnel_bounds(0.0, 0.0, s.constraints[i], s.planner, 0.0);
    b.lower[i] = r.lower;
    b.upper[i] = r.upper;
  }
  return b;
}

// |e_v(0)| per output; requires x(0) inside the initial funnel.
Eigen::VectorXd initial_velocity_error(const Scenario& s,
                                       const PlantModel& plant) {
  const auto out = plant.outputs(make_initial_state(s, plant));
  const Eigen::VectorXd v_d =
      velocity_reference(out.x, initial_bounds(s), s.k_x);
  return (out.v - v_d).cwiseAbs();
}

}  // namespace

ScenarioError::ScenarioError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        message
                                  : message),
      line_(line) {}

int Scenario::line_of(const std::string& path) const {
  std::string p = path;
  while (true) {
    const auto it = source_lines.find(p);
    if (it != source_lines.end()) return it->second;
    const auto dot = p.rfind('.');
    if (dot == std::string::npos) return 0;
    p.resize(dot);
  }
}

TimeSignal signal_from_config(const Value& value) {
  if (value.is_number()) return TimeSignal::constant(std::get<double>(value.data));
  if (!value.is_tagged()) {
    throw ScenarioError(value.line,
                        "expected a signal such as constant { value = 1 }");
  }
  const auto& t = std::get<config::Tagged>(value.data);
  const Reader r(t.body, t.tag);
  if (t.tag == "constant") return TimeSignal::constant(r.number("value"));
  if (t.tag == "sinusoid") {
    return TimeSignal::sinusoid(r.number("amp"), r.number("omega"),
                                r.number_or("phase", 0.0),
                                r.number_or("offset", 0.0));
  }
  if (t.tag == "exp_envelope") {
    const double rate = r.number("rate");
    if (!(rate > 0.0)) r.fail(value.line, "rate", "must be > 0");
    return TimeSignal::exp_envelope(r.number("rho0"), r.number("rho_inf"),
                                    rate);
  }
  if (t.tag == "sum") {
    const Value& terms = r.value("terms");
    if (!terms.is_list()) r.fail(terms.line, "terms", "expected a list");
    std::vector<TimeSignal> out;
    for (const auto& item : std::get<config::List>(terms.data).items) {
      out.push_back(signal_from_config(item));
    }
    return TimeSignal::sum(std::move(out));
  }
  if (t.tag == "scaled") {
    return TimeSignal::scaled(r.number("coeff"),
                              signal_from_config(r.value("signal")));
  }
  throw ScenarioError(value.line, "unknown signal kind '" + t.tag + "'");
}

Value signal_to_config(const TimeSignal& signal) {
  Block body;
  std::string tag;
  const auto& node = signal.node();
  if (const auto* c = std::get_if<TimeSignal::Constant>(&node)) {
    tag = "constant";
    body.set("value", num(c->value));
  } else if (const auto* s = std::get_if<TimeSignal::Sinusoid>(&node)) {
    tag = "sinusoid";
    body.set("amp", num(s->amplitude));
    body.set("omega", num(s->omega));
    body.set("phase", num(s->phase));
    body.set("offset", num(s->offset));
  } else if (const auto* e = std::get_if<TimeSignal::ExpEnvelope>(&node)) {
    tag = "exp_envelope";
    body.set("rho0", num(e->rho0));
    body.set("rho_inf", num(e->rho_inf));
    body.set("rate", num(e->rate));
  } else if (const auto* sum = std::get_if<TimeSignal::Sum>(&node)) {
    tag = "sum";
    std::vector<Value> terms;
    for (const auto& term : sum->terms) terms.push_back(signal_to_config(term));
    body.set("terms", config::list(std::move(terms)));
  } else {
    const auto& sc = std::get<TimeSignal::Scaled>(node);
    tag = "scaled";
    body.set("coeff", num(sc.coefficient));
    body.set("signal", signal_to_config(sc.inner.front()));
  }
  return config::tagged(std::move(tag), std::move(body));
}

Scenario scenario_from_config(const Block& root) {
  Scenario s;
  const Reader top(root, "");
  record_lines(root, "", s.source_lines);
  if (top.has("name")) s.name = top.word("name");
  const double outputs = top.number("outputs");
  if (outputs != std::floor(outputs) || outputs < 1 || outputs > 64) {
    top.fail(top.value("outputs").line, "outputs",
             "must be a positive integer");
  }
  s.outputs = static_cast<int>(outputs);

  const Reader cons = top.sub("constraints");
  for (int i = 0; i < s.outputs; ++i) {
    const Reader c = cons.sub(output_key(i));
    ConstraintPair pair;
    pair.hard_lower = signal_from_config(c.value("hard_lower"));
    pair.hard_upper = signal_from_config(c.value("hard_upper"));
    pair.soft_lower = signal_from_config(c.value("soft_lower"));
    pair.soft_upper = signal_from_config(c.value("soft_upper"));
    pair.eps_hard = c.number("eps_hard");
    pair.eps_soft = c.number("eps_soft");
    s.constraints.push_back(std::move(pair));
  }
  for (const auto& e : cons.block().entries) {
    bool known = false;
    for (int i = 0; i < s.outputs; ++i) known |= e.key == output_key(i);
    if (!known) {
      cons.fail(e.value.line, e.key,
                "unexpected section (outputs = " +
                    std::to_string(s.outputs) + ")");
    }
  }

  const Reader pl = top.sub("planner");
  const std::string variant = pl.word("variant");
  if (variant == "smooth") {
    s.planner.variant = PlannerVariant::kSmooth;
    s.planner.kappa = pl.number("kappa");
    s.planner.nu = pl.number("nu");
  } else if (variant == "nonsmooth") {
    s.planner.variant = PlannerVariant::kNonsmooth;
  } else {
    pl.fail(pl.value("variant").line, "variant",
            "expected smooth or nonsmooth, got '" + variant + "'");
  }
  s.planner.mu = pl.number("mu");
  s.planner.k_c = pl.number("k_c");

  const Reader ctl = top.sub("controller");
  s.k_x = ctl.number("k_x");
  s.k_v = ctl.number("k_v");
  const Reader env = ctl.sub("velocity_envelope");
  s.velocity_envelope.rho_inf = env.numbers("rho_inf");
  s.velocity_envelope.rate = env.numbers("rate");
  const Value& rho0 = env.value("rho0");
  if (rho0.is_word() && std::get<std::string>(rho0.data) == "auto") {
    s.velocity_envelope.rho0_scale = env.number("rho0_scale");
  } else {
    s.velocity_envelope.rho0 = env.numbers_of(rho0, "rho0");
  }

  const Reader plant = top.sub("plant");
  const std::string model = plant.word("model");
  std::vector<TimeSignal> disturbance;
  if (plant.has("disturbance")) {
    const Value& d = plant.value("disturbance");
    if (d.is_word() && std::get<std::string>(d.data) == "none") {
    } else if (d.is_list()) {
      for (const auto& item : std::get<config::List>(d.data).items) {
        disturbance.push_back(signal_from_config(item));
      }
    } else {
      plant.fail(d.line, "disturbance", "expected a list of signals or none");
    }
  }
  const Reader init = top.sub("initial");
  s.x0 = init.numbers("x");
  if (model == "mobile_robot") {
    MobileRobotParams p;
    p.mass = plant.number("mass");
    p.inertia = plant.number("inertia");
    p.hand_offset = plant.number("hand_offset");
    const Value& dv = plant.value("damping");
    std::vector<double> flat;
    if (dv.is_list()) {
      for (const auto& row : std::get<config::List>(dv.data).items) {
        if (row.is_list()) {
          const auto r = plant.numbers_of(row, "damping");
          flat.insert(flat.end(), r.begin(), r.end());
        } else if (row.is_number()) {
          flat.push_back(std::get<double>(row.data));
        }
      }
    }
    if (flat.size() != 4) {
      plant.fail(dv.line, "damping", "expected a 2x2 matrix [[a, b], [c, d]]");
    }
    p.damping << flat[0], flat[1], flat[2], flat[3];
    if (disturbance.size() == 2) {
      p.disturbance = {disturbance[0], disturbance[1]};
    } else if (!disturbance.empty()) {
      plant.fail(plant.value("disturbance").line, "disturbance",
                 "mobile_robot needs exactly 2 disturbance signals");
    }
    s.plant = p;
    s.theta0 = init.number("theta");
    s.psi0 = init.numbers("psi");
  } else if (model == "point_mass") {
    PointMassSpec p;
    p.mass = plant.numbers("mass");
    p.damping = plant.numbers("damping");
    p.disturbance = std::move(disturbance);
    s.plant = p;
    s.v0 = init.numbers("v");
  } else {
    plant.fail(plant.value("model").line, "model",
               "expected mobile_robot or point_mass, got '" + model + "'");
  }

  const Reader sim = top.sub("sim");
  s.sim.t_end = sim.number("t_end");
  s.sim.h = sim.number("h");
  try {
    s.sim.scheme = parse_scheme(sim.word("scheme"));
  } catch (const std::invalid_argument& e) {
    sim.fail(sim.value("scheme").line, "scheme", e.what());
  }
  const double stride = sim.number_or("record_stride", 1.0);
  if (stride != std::floor(stride) || stride < 1 || stride > 1e9) {
    sim.fail(sim.value("record_stride").line, "record_stride",
             "must be a positive integer");
  }
  s.sim.record_stride = static_cast<int>(stride);
  return s;
}

Block scenario_to_config(const Scenario& s) {
  Block root;
  root.set("name", config::word(s.name));
  root.set("outputs", num(s.outputs));

  Block cons;
  for (std::size_t i = 0; i < s.constraints.size(); ++i) {
    const auto& c = s.constraints[i];
    Block b;
    b.set("hard_lower", signal_to_config(c.hard_lower));
    b.set("hard_upper", signal_to_config(c.hard_upper));
    b.set("soft_lower", signal_to_config(c.soft_lower));
    b.set("soft_upper", signal_to_config(c.soft_upper));
    b.set("eps_hard", num(c.eps_hard));
    b.set("eps_soft", num(c.eps_soft));
    cons.set(output_key(static_cast<int>(i)), config::block(std::move(b)));
  }
  root.set("constraints", config::block(std::move(cons)));

  Block pl;
  const bool smooth = s.planner.variant == PlannerVariant::kSmooth;
  pl.set("variant", config::word(smooth ? "smooth" : "nonsmooth"));
  pl.set("mu", num(s.planner.mu));
  pl.set("k_c", num(s.planner.k_c));
  if (smooth) {
    pl.set("kappa", num(s.planner.kappa));
    pl.set("nu", num(s.planner.nu));
  }
  root.set("planner", config::block(std::move(pl)));

  Block ctl;
  ctl.set("k_x", num(s.k_x));
  ctl.set("k_v", num(s.k_v));
  Block env;
  env.set("rho_inf", nums(s.velocity_envelope.rho_inf));
  env.set("rate", nums(s.velocity_envelope.rate));
  if (s.velocity_envelope.rho0) {
    env.set("rho0", nums(*s.velocity_envelope.rho0));
  } else {
    env.set("rho0", config::word("auto"));
    env.set("rho0_scale", num(s.velocity_envelope.rho0_scale));
  }
  ctl.set("velocity_envelope", config::block(std::move(env)));
  root.set("controller", config::block(std::move(ctl)));

  Block plant;
  Block init;
  init.set("x", nums(s.x0));
  auto disturbance_value = [](const std::vector<TimeSignal>& d) {
    if (d.empty()) return config::word("none");
    std::vector<Value> items;
    for (const auto& sig : d) items.push_back(signal_to_config(sig));
    return config::list(std::move(items));
  };
  if (const auto* robot = std::get_if<MobileRobotParams>(&s.plant)) {
    plant.set("model", config::word("mobile_robot"));
    plant.set("mass", num(robot->mass));
    plant.set("inertia", num(robot->inertia));
    plant.set("damping",
              config::list({nums({robot->damping(0, 0), robot->damping(0, 1)}),
                            nums({robot->damping(1, 0), robot->damping(1, 1)})}));
    plant.set("hand_offset", num(robot->hand_offset));
    plant.set("disturbance",
              disturbance_value({robot->disturbance[0], robot->disturbance[1]}));
    init.set("theta", num(s.theta0));
    init.set("psi", nums(s.psi0));
  } else {
    const auto& pm = std::get<PointMassSpec>(s.plant);
    plant.set("model", config::word("point_mass"));
    plant.set("mass", nums(pm.mass));
    plant.set("damping", nums(pm.damping));
    plant.set("disturbance", disturbance_value(pm.disturbance));
    init.set("v", nums(s.v0));
  }
  root.set("plant", config::block(std::move(plant)));
  root.set("initial", config::block(std::move(init)));

  Block sim;
  sim.set("t_end", num(s.sim.t_end));
  sim.set("h", num(s.sim.h));
  sim.set("scheme", config::word(std::string(scheme_name(s.sim.scheme))));
  sim.set("record_stride", num(s.sim.record_stride));
  root.set("sim", config::block(std::move(sim)));
  return root;
}

Scenario parse_scenario(std::string_view text,
                        const std::vector<std::string>& overrides) {
  Block root = config::parse(text);
  for (const auto& o : overrides) config::apply_override(root, o);
  return scenario_from_config(root);
}

Scenario load_scenario(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), overrides);
}

std::string serialize_scenario(const Scenario& scenario) {
  return config::serialize(scenario_to_config(scenario));
}

std::string describe(const ValidationIssue& issue) {
  std::ostringstream os;
  if (issue.line > 0) os << "line " << issue.line << ": ";
  os << "[" << issue.check << "] ";
  if (issue.output >= 0) os << "output " << issue.output + 1 << ": ";
  os << issue.message;
  if (!std::isnan(issue.time)) os << " (at t=" << issue.time << ")";
  return os.str();
}

std::vector<ValidationIssue> validate_scenario(const Scenario& s) {
  std::vector<ValidationIssue> issues;
  check_parameters(s, issues);
  if (!issues.empty()) return issues;

  const auto ts = sample_times(s);
  for (int i = 0; i < s.outputs; ++i) {
    const auto& c = s.constraints[i];
    const int line = s.line_of("constraints." + output_key(i));
    for (double t : ts) {
      const double width = c.hard_upper.value(t) - c.hard_lower.value(t);
      if (!(width >= c.eps_hard)) {
        std::ostringstream msg;
        msg << "hard band width " << width << " is below eps_hard "
            << c.eps_hard;
        issues.push_back({"feasibility-margin", msg.str(), t, i, line});
        break;
      }
    }
    for (double t : ts) {
      const double width = c.soft_upper.value(t) - c.soft_lower.value(t);
      if (!(width >= c.eps_soft)) {
        std::ostringstream msg;
        msg << "soft band width " << width << " is below eps_soft "
            << c.eps_soft;
        issues.push_back({"feasibility-margin", msg.str(), t, i, line});
        break;
      }
    }
    const Gaps g = eta(c, 0.0);
    if (!(g.lower > 0.0) || !(g.upper > 0.0)) {
      std::ostringstream msg;
      msg << "hard and soft bands do not overlap at t = 0 (hard_upper - "
             "soft_lower = "
          << g.lower << ", soft_upper - hard_lower = " << g.upper << ")";
      issues.push_back({"initial-compatibility", msg.str(), 0.0, i, line});
    }
  }
  if (!issues.empty()) return issues;

  const FunnelBounds b0 = initial_bounds(s);
  for (int i = 0; i < s.outputs; ++i) {
    const double half = 0.5 * (b0.upper[i] - b0.lower[i]);
    const double z = (s.x0[i] - 0.5 * (b0.upper[i] + b0.lower[i])) / half;
    if (!(std::abs(z) < 1.0 - kFunnelEdgeTolerance)) {
      std::ostringstream msg;
      msg << "x(0) = " << s.x0[i] << " is not strictly inside the initial "
          << "funnel (" << b0.lower[i] << ", " << b0.upper[i]
          << "); the initial output must satisfy both bands at t = 0";
      issues.push_back(
          {"initial-funnel", msg.str(), 0.0, i, s.line_of("initial.x")});
    }
  }
  if (!issues.empty()) return issues;

  const auto plant = make_plant(s);
  const Eigen::VectorXd ev0 = initial_velocity_error(s, *plant);
  if (const auto& rho0 = s.velocity_envelope.rho0) {
    for (int i = 0; i < s.outputs; ++i) {
      if (!((*rho0)[i] > ev0[i])) {
        std::ostringstream msg;
        msg << "rho0 = " << (*rho0)[i] << " must exceed |e_v(0)| = "
            << ev0[i];
        issues.push_back(
            {"velocity-envelope", msg.str(), 0.0, i,
             s.line_of("controller.velocity_envelope.rho0")});
      }
    }
  }
  return issues;
}

ClosedLoop build_closed_loop(const Scenario& s) {
  const auto issues = validate_scenario(s);
  if (!issues.empty()) throw std::invalid_argument(describe(issues.front()));
  ClosedLoop loop;
  loop.plant = make_plant(s);
  loop.initial_state = make_initial_state(s, *loop.plant);
  loop.constraints = s.constraints;
  loop.planner = s.planner;
  loop.controller.k_x = s.k_x;
  loop.controller.k_v = s.k_v;
  const auto& ve = s.velocity_envelope;
  const Eigen::VectorXd ev0 = initial_velocity_error(s, *loop.plant);
  for (int i = 0; i < s.outputs; ++i) {
    const double rho0 = ve.rho0 ? (*ve.rho0)[i]
                                : ve.rho0_scale * std::max(ev0[i], ve.rho_inf[i]);
    loop.controller.gamma_v.push_back(
        TimeSignal::exp_envelope(rho0, ve.rho_inf[i], ve.rate[i]));
  }
  return loop;
}

SimTrace simulate(const Scenario& scenario) {
  return simulate(scenario, scenario.sim);
}

SimTrace simulate(const Scenario& scenario, const SimConfig& config) {
  return simulate(build_closed_loop(scenario), config);
}

SimTrace oracle_simulate(const Scenario& scenario) {
  const auto& sim = scenario.sim;
  // Record at the same instants as the configured run.
  const double ratio = sim.h * sim.record_stride / kOracleStep;
  const int stride = std::max(1, static_cast<int>(std::lround(ratio)));
  return oracle_simulate(build_closed_loop(scenario), sim.t_end, stride);
}

CheckReport check_trace(const SimTrace& trace, const Scenario& scenario) {
  return check_trace(trace, scenario.planner);
}

Scenario reference_scenario(double k_c) {
  constexpr double pi = std::numbers::pi;
  Scenario s;
  s.name = k_c == 3.0 ? "paper_kc3" : "paper_kc03";
  s.outputs = 2;

  // Moving reference x_d(t) = (-1.5 + 5.8 cos(0.24 t + 1.5),
  //                            5.8 sin(0.24 t + 1.5)).
  const std::array<TimeSignal, 2> reference = {
      TimeSignal::sinusoid(5.8, 0.24, 1.5, -1.5),
      TimeSignal::sinusoid(5.8, 0.24, 1.5 - pi / 2, 0.0)};
  // Tracking tolerance gamma_i(t); rho0_i is 1.5x the initial tracking error
  // (2.10 and 4.09), rounded up.
  const std::array<double, 2> rho0 = {3.15, 6.13};
  const std::array<double, 2> box = {6.58, 4.63};
  for (int i = 0; i < 2; ++i) {
    const TimeSignal gamma = TimeSignal::exp_envelope(rho0[i], 0.2, 0.7);
    ConstraintPair c;
    c.hard_lower = TimeSignal::constant(-box[i]);
    c.hard_upper = TimeSignal::constant(box[i]);
    c.soft_lower = TimeSignal::sum(
        {reference[i], TimeSignal::scaled(-1.0, gamma)});
    c.soft_upper = TimeSignal::sum({reference[i], gamma});
    c.eps_hard = 1.0;
    c.eps_soft = 0.2;
    s.constraints.push_back(std::move(c));
  }

  s.planner.variant = PlannerVariant::kSmooth;
  s.planner.mu = 0.01;
  s.planner.k_c = k_c;
  s.planner.kappa = 4.0;
  s.planner.nu = 10.0;

  s.k_x = 0.2;
  s.k_v = 3.0;
  s.velocity_envelope.rho_inf = {0.1, 0.1};
  s.velocity_envelope.rate = {0.3, 0.3};
  s.velocity_envelope.rho0_scale = 1.5;

  MobileRobotParams robot;
  robot.disturbance = reference_robot_disturbance();
  s.plant = robot;
  s.x0 = {-3.19, 1.70};
  s.theta0 = -0.33;
  s.psi0 = {0.2, -0.1};

  s.sim.t_end = 30.0;
  s.sim.h = 1e-3;
  s.sim.scheme = Scheme::kRk4;
  s.sim.record_stride = 10;
  return s;
}

}  // namespace ccfunnel
