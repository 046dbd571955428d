#include "epidrive/sim.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "epidrive/error.hpp"
#include "epidrive/rule_file.hpp"

namespace epidrive {

namespace {

void require_positive(double v, const char* field) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ValidationError(field, fmt::format("must be positive (got {})", v));
  }
}

double smooth(double previous, double target, double tau, double dt) {
  // Backward-Euler first-order lag; tau = 0 passes the target through.
  return (previous * tau + target * dt) / (tau + dt);
}

}  // namespace

const char* mode_name(DriveMode mode) noexcept {
  switch (mode) {
    case DriveMode::off: return "off";
    case DriveMode::idle: return "idle";
    case DriveMode::forward: return "forward";
    case DriveMode::reverse: return "reverse";
  }
  return "?";
}

void validate(const PlantConfig& c) {
  validate(c.gear);
  if (c.rounded_gains && !c.allow_rounded_gains) {
    throw Error(ErrorCategory::config,
                "gear.rounded_gains requires gear.allow_rounded_gains: true");
  }
  validate(c.engine, "plant.engine");
  validate(c.dc_motor, "plant.dc_motor");
  validate(c.engine_regulator, "plant.engine_regulator");
  validate(c.motor_regulator, "plant.motor_regulator");
  const ControllerConfig& k = c.controller;
  if (k.defuzz_grid < 2) {
    throw ValidationError("controller.defuzz_grid", "needs at least 2 points");
  }
  require_positive(k.engine_speed_per_volt, "controller.engine_speed_per_volt");
  require_positive(k.wheel_accel_per_volt, "controller.wheel_accel_per_volt");
  require_positive(k.rated_wheel_speed, "controller.rated_wheel_speed");
  require_positive(k.max_wheel_speed, "controller.max_wheel_speed");
  if (!std::isfinite(k.rate_filter_tau) || k.rate_filter_tau < 0.0) {
    throw ValidationError("controller.rate_filter_tau", "must be >= 0");
  }
  if (!std::isfinite(k.engine_setpoint_tau) || k.engine_setpoint_tau < 0.0) {
    throw ValidationError("controller.engine_setpoint_tau", "must be >= 0");
  }
}

PedalController make_controller(const ControllerConfig& config) {
  auto grid = static_cast<std::size_t>(config.defuzz_grid);
  if (config.rule_base.empty() || config.rule_base == "builtin") {
    return PedalController(
        parse_rule_base(shipped_rule_text(), "pedal_controller.rules"), grid);
  }
  return PedalController(load_rule_base(config.rule_base), grid);
}

Simulator::Simulator(PlantConfig config, PedalController controller)
    : config_((validate(config), std::move(config))),
      gear_(config_.gear, config_.allow_rounded_gains ? config_.rounded_gains
                                                      : std::nullopt),
      controller_(std::move(controller)) {}

Simulator::Simulator(PlantConfig config)
    : Simulator(config, make_controller(config.controller)) {}

VehicleState Simulator::initial_state() const {
  VehicleState s;
  s.engine_regulator.gains = config_.engine_regulator;
  s.motor_regulator.gains = config_.motor_regulator;
  return s;
}

TickResult Simulator::tick(const VehicleState& state, const PedalState& pedals,
                           double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCategory::step_size,
                fmt::format("tick dt must be positive (got {})", dt));
  }
  validate(pedals);
  const ControllerConfig& cc = config_.controller;
  const BlockGains& g = gear_.gains();
  const double t_end = static_cast<double>(state.tick_count + 1) * dt;

  TickResult out;
  VehicleState& next = out.state;
  next = state;
  next.tick_count = state.tick_count + 1;
  next.time = t_end;
  next.last_pedals = pedals;

  // (1) pedal velocities: backward difference, then first-order smoothing.
  next.rates.accel = smooth(state.rates.accel,
                            (pedals.accel - state.last_pedals.accel) / dt,
                            cc.rate_filter_tau, dt);
  next.rates.brake = smooth(state.rates.brake,
                            (pedals.brake - state.last_pedals.brake) / dt,
                            cc.rate_filter_tau, dt);

  // (2) controller. Feedback is the DC motor speed relative to its idle
  // balance, expressed in wheel units along the travel direction.
  const double offset = g.motor * (state.dc_motor.speed -
                                   gear_.balance_speed(state.engine.speed));
  const double feedback = state.direction * offset / cc.rated_wheel_speed;
  const ControlCommand cmd = controller_.step(pedals, next.rates, feedback);

  // (3) commands -> setpoints.
  double engine_setpoint = 0.0;
  double motor_setpoint = 0.0;
  double v_engine = 0.0;
  double v_motor = 0.0;
  if (pedals.ignition) {
    const double engine_target = cmd.engine_no_fire
                                     ? state.engine_setpoint
                                     : cc.engine_speed_per_volt * cmd.engine_voltage;
    next.engine_setpoint =
        smooth(state.engine_setpoint, engine_target, cc.engine_setpoint_tau, dt);

    if (state.wheel_demand == 0.0) next.direction = pedals.reverse ? -1 : 1;
    const double demand_rate =
        cmd.motor_no_fire ? 0.0 : cc.wheel_accel_per_volt * cmd.motor_voltage;
    next.wheel_demand =
        std::clamp(state.wheel_demand + demand_rate * dt, 0.0, cc.max_wheel_speed);

    engine_setpoint = next.engine_setpoint;
    // With zero demand this is exactly the idle coupling Gain3 * omega_engine.
    motor_setpoint = gear_.balance_speed(state.engine.speed) +
                     next.direction * next.wheel_demand / g.motor;

    // (4) regulators.
    const RegulatorOutput re = regulator_step(state.engine_regulator,
                                              engine_setpoint, state.engine.speed, dt);
    const RegulatorOutput rm = regulator_step(state.motor_regulator,
                                              motor_setpoint, state.dc_motor.speed, dt);
    v_engine = re.voltage;
    v_motor = rm.voltage;
    next.engine_regulator = re.next;
    next.motor_regulator = rm.next;
  } else {
    next.engine_setpoint = 0.0;
    next.wheel_demand = 0.0;
    next.direction = pedals.reverse ? -1 : 1;
    next.engine_regulator.integral = 0.0;
    next.motor_regulator.integral = 0.0;
  }

  // (5) plant, (6) kinematics.
  try {
    next.engine = step(config_.engine, state.engine, v_engine, dt);
    next.dc_motor = step(config_.dc_motor, state.dc_motor, v_motor, dt);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::divergence) throw DivergenceError(t_end, e.what());
    throw;
  }
  next.omega_arm = gear_.wheel_speed(next.engine.speed, next.dc_motor.speed);
  if (!std::isfinite(next.omega_arm) || !std::isfinite(v_engine) ||
      !std::isfinite(v_motor) || !std::isfinite(next.wheel_demand) ||
      !std::isfinite(cmd.engine_voltage) || !std::isfinite(cmd.motor_voltage)) {
    throw DivergenceError(t_end, "non-finite signal in the drivetrain");
  }

  TraceSample& s = out.sample;
  s.time = t_end;
  s.accel = pedals.accel;
  s.brake = pedals.brake;
  s.reverse = pedals.reverse;
  s.ignition = pedals.ignition;
  s.accel_rate = next.rates.accel;
  s.brake_rate = next.rates.brake;
  s.engine_voltage = v_engine;
  s.motor_voltage = v_motor;
  s.omega_engine = next.engine.speed;
  s.omega_motor = next.dc_motor.speed;
  s.omega_arm = next.omega_arm;
  s.flc_engine = cmd.engine_voltage;
  s.flc_motor = cmd.motor_voltage;
  s.no_fire = cmd.no_fire();
  s.engine_setpoint = engine_setpoint;
  s.motor_setpoint = motor_setpoint;
  s.wheel_demand = next.wheel_demand;
  if (!pedals.ignition) {
    s.mode = DriveMode::off;
  } else if (next.wheel_demand == 0.0) {
    s.mode = DriveMode::idle;
  } else {
    s.mode = next.direction > 0 ? DriveMode::forward : DriveMode::reverse;
  }
  return out;
}

std::vector<Block> Simulator::block_diagram() const {
  return {
      {"accelerator_pedal", {"pedal_rate_estimator", "fuzzy_controller"}},
      {"brake_pedal", {"pedal_rate_estimator", "fuzzy_controller"}},
      {"reverse_switch", {"wheel_demand_integrator"}},
      {"ignition_switch", {"engine_regulator", "motor_regulator"}},
      {"pedal_rate_estimator", {"fuzzy_controller"}},
      {"fuzzy_controller", {"engine_setpoint_map", "wheel_demand_integrator"}},
      {"engine_setpoint_map", {"engine_regulator"}},
      {"wheel_demand_integrator", {"motor_setpoint_map"}},
      {"gain3_idle_coupling", {"motor_setpoint_map"}},
      {"motor_setpoint_map", {"motor_regulator"}},
      {"engine_regulator", {"engine_motor"}},
      {"motor_regulator", {"dc_motor"}},
      {"engine_motor", {"gain1_engine", "gain3_idle_coupling", "engine_regulator"}},
      {"dc_motor", {"gain2_motor", "motor_encoder", "motor_regulator"}},
      {"motor_encoder", {"fuzzy_controller"}},
      {"gain1_engine", {"wheel_sum"}},
      {"gain2_motor", {"wheel_sum"}},
      {"wheel_sum", {}},
  };
}

}  // namespace epidrive
