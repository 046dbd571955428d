#include "epidrive/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "epidrive/error.hpp"

namespace epidrive {

double PiecewiseLinear::operator()(double t) const noexcept {
  if (knots_.empty()) return 0.0;
  if (t <= knots_.front().t) return knots_.front().value;
  if (t >= knots_.back().t) return knots_.back().value;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const Knot& k) { return v < k.t; });
  const auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return lo->value + s * (hi->value - lo->value);
}

bool SwitchSchedule::operator()(double t) const noexcept {
  bool state = initial_;
  for (const SwitchEvent& e : events_) {
    if (e.t > t) break;
    state = e.on;
  }
  return state;
}

std::size_t ScenarioSpec::tick_count() const {
  if (duration <= 0.0) return 0;
  const double ratio = duration / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(ratio));
}

PedalState ScenarioSpec::pedals_at(double t) const {
  return {accel(t), brake(t), reverse(t), ignition(t)};
}

void validate(const ScenarioSpec& spec) {
  if (spec.name.empty()) throw ValidationError("name", "must not be empty");
  if (!std::isfinite(spec.duration) || spec.duration < 0.0) {
    throw ValidationError("duration", fmt::format("must be >= 0 (got {})", spec.duration));
  }
  if (!std::isfinite(spec.dt) || !(spec.dt > 0.0)) {
    throw ValidationError("dt", fmt::format("must be > 0 (got {})", spec.dt));
  }
  auto check_profile = [](const PiecewiseLinear& p, const char* field) {
    const auto& k = p.knots();
    for (std::size_t i = 0; i < k.size(); ++i) {
      const std::string f = fmt::format("pedals.{}[{}]", field, i);
      if (!std::isfinite(k[i].t) || k[i].t < 0.0) {
        throw ValidationError(f, fmt::format("time must be >= 0 (got {})", k[i].t));
      }
      if (!std::isfinite(k[i].value) || k[i].value < 0.0 || k[i].value > 1.0) {
        throw ValidationError(f, fmt::format("value must lie in [0, 1] (got {})",
                                             k[i].value));
      }
      if (i > 0 && !(k[i - 1].t < k[i].t)) {
        throw ValidationError(f, "knot times must be strictly increasing");
      }
    }
  };
  check_profile(spec.accel, "accel");
  check_profile(spec.brake, "brake");
  auto check_switch = [](const SwitchSchedule& s, const char* field) {
    const auto& e = s.events();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string f = fmt::format("switches.{}.events[{}]", field, i);
      if (!std::isfinite(e[i].t) || e[i].t < 0.0) {
        throw ValidationError(f, "time must be >= 0");
      }
      if (i > 0 && !(e[i - 1].t < e[i].t)) {
        throw ValidationError(f, "event times must be strictly increasing");
      }
    }
  };
  check_switch(spec.reverse, "reverse");
  check_switch(spec.ignition, "ignition");
  validate(spec.plant);
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const YAML::Mark m = node.Mark();
    throw ParseError(source_, m.line + 1, m.column + 1, message);
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, fmt::format("{}: expected a scalar", field));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("{}: cannot read '{}' as {}", field, node.Scalar(),
                             type_name<T>()));
    }
  }

  // Reads known keys of a mapping and rejects unknown ones.
  template <typename F>
  void mapping(const YAML::Node& node, const std::string& field,
               const std::set<std::string>& allowed, F&& on_key) const {
    if (!node.IsMap()) fail(node, fmt::format("{}: expected a mapping", field));
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const std::string path = field.empty() ? key : field + "." + key;
      if (!allowed.count(key)) throw_unknown(kv.first, path);
      on_key(key, kv.second, path);
    }
  }

  [[noreturn]] void throw_unknown(const YAML::Node& key, const std::string& path) const {
    fail(key, fmt::format("unknown field '{}'", path));
  }

 private:
  template <typename T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    if constexpr (std::is_same_v<T, int>) return "an integer";
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    return "a string";
  }

  std::string source_;
};

void read_motor(const Reader& r, const YAML::Node& node, const std::string& field,
                MotorParams& p) {
  r.mapping(node, field,
            {"inertia", "damping", "motor_constant", "resistance", "inductance",
             "load_torque"},
            [&](const std::string& key, const YAML::Node& v, const std::string& path) {
              const double x = r.scalar<double>(v, path);
              if (key == "inertia") p.inertia = x;
              else if (key == "damping") p.damping = x;
              else if (key == "motor_constant") p.motor_constant = x;
              else if (key == "resistance") p.resistance = x;
              else if (key == "inductance") p.inductance = x;
              else p.load_torque = x;
            });
}

void read_regulator(const Reader& r, const YAML::Node& node, const std::string& field,
                    RegulatorGains& g) {
  r.mapping(node, field, {"kp", "ki", "v_min", "v_max"},
            [&](const std::string& key, const YAML::Node& v, const std::string& path) {
              const double x = r.scalar<double>(v, path);
              if (key == "kp") g.kp = x;
              else if (key == "ki") g.ki = x;
              else if (key == "v_min") g.v_min = x;
              else g.v_max = x;
            });
}

PiecewiseLinear read_profile(const Reader& r, const YAML::Node& node,
                             const std::string& field) {
  if (!node.IsSequence()) r.fail(node, fmt::format("{}: expected a list of [t, value]", field));
  std::vector<Knot> knots;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const YAML::Node k = node[i];
    const std::string path = fmt::format("{}[{}]", field, i);
    if (!k.IsSequence() || k.size() != 2) r.fail(k, fmt::format("{}: expected [t, value]", path));
    knots.push_back({r.scalar<double>(k[0], path + ".t"),
                     r.scalar<double>(k[1], path + ".value")});
  }
  return PiecewiseLinear(std::move(knots));
}

SwitchSchedule read_switch(const Reader& r, const YAML::Node& node,
                           const std::string& field, bool default_initial) {
  bool initial = default_initial;
  std::vector<SwitchEvent> events;
  r.mapping(node, field, {"initial", "events"},
            [&](const std::string& key, const YAML::Node& v, const std::string& path) {
              if (key == "initial") {
                initial = r.scalar<bool>(v, path);
                return;
              }
              if (!v.IsSequence()) r.fail(v, fmt::format("{}: expected a list of [t, on]", path));
              for (std::size_t i = 0; i < v.size(); ++i) {
                const YAML::Node e = v[i];
                const std::string p = fmt::format("{}[{}]", path, i);
                if (!e.IsSequence() || e.size() != 2) r.fail(e, fmt::format("{}: expected [t, on]", p));
                events.push_back({r.scalar<double>(e[0], p + ".t"),
                                  r.scalar<bool>(e[1], p + ".on")});
              }
            });
  return SwitchSchedule(std::move(events), initial);
}

void read_plant(const Reader& r, const YAML::Node& node, PlantConfig& plant,
                const std::filesystem::path& base_dir) {
  r.mapping(node, "plant",
            {"gear", "engine", "dc_motor", "engine_regulator", "motor_regulator",
             "controller"},
            [&](const std::string& key, const YAML::Node& v, const std::string& path) {
              if (key == "gear") {
                r.mapping(v, path,
                          {"n_sun", "n_planet", "n_ring", "allow_rounded_gains",
                           "rounded_gains"},
                          [&](const std::string& k, const YAML::Node& x,
                              const std::string& p) {
                            if (k == "n_sun") plant.gear.n_sun = r.scalar<int>(x, p);
                            else if (k == "n_planet") plant.gear.n_planet = r.scalar<int>(x, p);
                            else if (k == "n_ring") plant.gear.n_ring = r.scalar<int>(x, p);
                            else if (k == "allow_rounded_gains")
                              plant.allow_rounded_gains = r.scalar<bool>(x, p);
                            else {
                              BlockGains g;
                              r.mapping(x, p, {"gain1", "gain2", "gain3"},
                                        [&](const std::string& gk, const YAML::Node& gv,
                                            const std::string& gp) {
                                          const double val = r.scalar<double>(gv, gp);
                                          if (gk == "gain1") g.engine = val;
                                          else if (gk == "gain2") g.motor = val;
                                          else g.idle_coupling = val;
                                        });
                              plant.rounded_gains = g;
                            }
                          });
              } else if (key == "engine") {
                read_motor(r, v, path, plant.engine);
              } else if (key == "dc_motor") {
                read_motor(r, v, path, plant.dc_motor);
              } else if (key == "engine_regulator") {
                read_regulator(r, v, path, plant.engine_regulator);
              } else if (key == "motor_regulator") {
                read_regulator(r, v, path, plant.motor_regulator);
              } else {
                ControllerConfig& c = plant.controller;
                r.mapping(v, path,
                          {"rule_base", "defuzz_grid", "engine_speed_per_volt",
                           "wheel_accel_per_volt", "rated_wheel_speed", "max_wheel_speed",
                           "rate_filter_tau", "engine_setpoint_tau"},
                          [&](const std::string& k, const YAML::Node& x,
                              const std::string& p) {
                            if (k == "rule_base") {
                              std::string rb = r.scalar<std::string>(x, p);
                              if (rb != "builtin" && !rb.empty()) {
                                std::filesystem::path fp(rb);
                                if (fp.is_relative() && !base_dir.empty()) fp = base_dir / fp;
                                rb = fp.lexically_normal().string();
                              }
                              c.rule_base = rb;
                            } else if (k == "defuzz_grid") c.defuzz_grid = r.scalar<int>(x, p);
                            else if (k == "engine_speed_per_volt") c.engine_speed_per_volt = r.scalar<double>(x, p);
                            else if (k == "wheel_accel_per_volt") c.wheel_accel_per_volt = r.scalar<double>(x, p);
                            else if (k == "rated_wheel_speed") c.rated_wheel_speed = r.scalar<double>(x, p);
                            else if (k == "max_wheel_speed") c.max_wheel_speed = r.scalar<double>(x, p);
                            else if (k == "rate_filter_tau") c.rate_filter_tau = r.scalar<double>(x, p);
                            else c.engine_setpoint_tau = r.scalar<double>(x, p);
                          });
              }
            });
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view text, const std::string& source,
                            const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  const Reader r(source);
  ScenarioSpec spec;
  if (!root.IsMap()) r.fail(root, "scenario document must be a mapping");
  r.mapping(root, "",
            {"name", "description", "duration", "dt", "pedals", "switches", "plant"},
            [&](const std::string& key, const YAML::Node& v, const std::string& path) {
              if (key == "name") spec.name = r.scalar<std::string>(v, path);
              else if (key == "description") spec.description = r.scalar<std::string>(v, path);
              else if (key == "duration") spec.duration = r.scalar<double>(v, path);
              else if (key == "dt") spec.dt = r.scalar<double>(v, path);
              else if (key == "pedals") {
                r.mapping(v, path, {"accel", "brake"},
                          [&](const std::string& k, const YAML::Node& x, const std::string& p) {
                            (k == "accel" ? spec.accel : spec.brake) = read_profile(r, x, p);
                          });
              } else if (key == "switches") {
                r.mapping(v, path, {"reverse", "ignition"},
                          [&](const std::string& k, const YAML::Node& x, const std::string& p) {
                            if (k == "reverse") spec.reverse = read_switch(r, x, p, false);
                            else spec.ignition = read_switch(r, x, p, true);
                          });
              } else {
                read_plant(r, v, spec.plant, base_dir);
              }
            });
  if (!root["name"]) throw ValidationError("name", "is required");
  if (!root["duration"]) throw ValidationError("duration", "is required");
  validate(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCategory::io, fmt::format("cannot open scenario '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string(), path.parent_path());
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }

YAML::Node flow_map() {
  YAML::Node n(YAML::NodeType::Map);
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

YAML::Node motor_node(const MotorParams& p) {
  YAML::Node n = flow_map();
  n["inertia"] = num(p.inertia);
  n["damping"] = num(p.damping);
  n["motor_constant"] = num(p.motor_constant);
  n["resistance"] = num(p.resistance);
  n["inductance"] = num(p.inductance);
  n["load_torque"] = num(p.load_torque);
  return n;
}

YAML::Node regulator_node(const RegulatorGains& g) {
  YAML::Node n = flow_map();
  n["kp"] = num(g.kp);
  n["ki"] = num(g.ki);
  n["v_min"] = num(g.v_min);
  n["v_max"] = num(g.v_max);
  return n;
}

YAML::Node profile_node(const PiecewiseLinear& p) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  for (const Knot& k : p.knots()) {
    YAML::Node pair(YAML::NodeType::Sequence);
    pair.push_back(num(k.t));
    pair.push_back(num(k.value));
    n.push_back(pair);
  }
  return n;
}

YAML::Node switch_node(const SwitchSchedule& s) {
  YAML::Node n = flow_map();
  n["initial"] = s.initial();
  YAML::Node events(YAML::NodeType::Sequence);
  for (const SwitchEvent& e : s.events()) {
    YAML::Node pair(YAML::NodeType::Sequence);
    pair.push_back(num(e.t));
    pair.push_back(e.on);
    events.push_back(pair);
  }
  n["events"] = events;
  return n;
}

}  // namespace

std::string dump_scenario(const ScenarioSpec& spec) {
  YAML::Node root;
  root["name"] = spec.name;
  root["description"] = spec.description;
  root["duration"] = num(spec.duration);
  root["dt"] = num(spec.dt);
  root["pedals"]["accel"] = profile_node(spec.accel);
  root["pedals"]["brake"] = profile_node(spec.brake);
  root["switches"]["reverse"] = switch_node(spec.reverse);
  root["switches"]["ignition"] = switch_node(spec.ignition);

  const PlantConfig& p = spec.plant;
  YAML::Node gear;
  gear["n_sun"] = p.gear.n_sun;
  gear["n_planet"] = p.gear.n_planet;
  gear["n_ring"] = p.gear.n_ring;
  gear["allow_rounded_gains"] = p.allow_rounded_gains;
  if (p.rounded_gains) {
    YAML::Node g = flow_map();
    g["gain1"] = num(p.rounded_gains->engine);
    g["gain2"] = num(p.rounded_gains->motor);
    g["gain3"] = num(p.rounded_gains->idle_coupling);
    gear["rounded_gains"] = g;
  }
  root["plant"]["gear"] = gear;
  root["plant"]["engine"] = motor_node(p.engine);
  root["plant"]["dc_motor"] = motor_node(p.dc_motor);
  root["plant"]["engine_regulator"] = regulator_node(p.engine_regulator);
  root["plant"]["motor_regulator"] = regulator_node(p.motor_regulator);
  YAML::Node c;
  c["rule_base"] = p.controller.rule_base;
  c["defuzz_grid"] = p.controller.defuzz_grid;
  c["engine_speed_per_volt"] = num(p.controller.engine_speed_per_volt);
  c["wheel_accel_per_volt"] = num(p.controller.wheel_accel_per_volt);
  c["rated_wheel_speed"] = num(p.controller.rated_wheel_speed);
  c["max_wheel_speed"] = num(p.controller.max_wheel_speed);
  c["rate_filter_tau"] = num(p.controller.rate_filter_tau);
  c["engine_setpoint_tau"] = num(p.controller.engine_setpoint_tau);
  root["plant"]["controller"] = c;

  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCategory::io, fmt::format("cannot write scenario '{}'", path.string()));
  }
  out << dump_scenario(spec);
  if (!out) {
    throw Error(ErrorCategory::io, fmt::format("write failed for '{}'", path.string()));
  }
}

Trace run(const Simulator& sim, const ScenarioSpec& scenario) {
  validate(scenario);
  Trace trace;
  trace.scenario = scenario.name;
  trace.dt = scenario.dt;
  const std::size_t n = scenario.tick_count();
  trace.samples.reserve(n);

  VehicleState state = sim.initial_state();
  state.last_pedals = scenario.pedals_at(0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    TickResult r = sim.tick(state, scenario.pedals_at(t), scenario.dt);
    state = std::move(r.state);
    trace.samples.push_back(r.sample);
  }
  return trace;
}

Trace run(const ScenarioSpec& scenario) {
  validate(scenario);
  return run(Simulator(scenario.plant), scenario);
}

}  // namespace epidrive
