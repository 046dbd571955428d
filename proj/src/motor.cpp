#include "epidrive/motor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "epidrive/error.hpp"

namespace epidrive {

MotorParams engine_motor_defaults() { return MotorParams{}; }

MotorParams dc_motor_defaults() {
  MotorParams p;
  p.motor_constant = 8.0;
  return p;
}

void validate(const MotorParams& p, const char* prefix) {
  auto require = [prefix](bool ok, const char* field, const char* rule,
                          double value) {
    if (!ok) {
      throw ValidationError(fmt::format("{}.{}", prefix, field),
                            fmt::format("must be {} (got {})", rule, value));
    }
  };
  require(std::isfinite(p.inertia) && p.inertia > 0.0, "inertia", "> 0", p.inertia);
  require(std::isfinite(p.inductance) && p.inductance > 0.0, "inductance", "> 0",
          p.inductance);
  require(std::isfinite(p.resistance) && p.resistance > 0.0, "resistance", "> 0",
          p.resistance);
  require(std::isfinite(p.motor_constant) && p.motor_constant > 0.0,
          "motor_constant", "> 0", p.motor_constant);
  require(std::isfinite(p.damping) && p.damping >= 0.0, "damping", ">= 0",
          p.damping);
  require(std::isfinite(p.load_torque) && p.load_torque >= 0.0, "load_torque",
          ">= 0", p.load_torque);
}

TorqueTerms torque_terms(const MotorParams& p, const MotorState& s) {
  TorqueTerms t;
  t.electromagnetic = p.motor_constant * s.current;
  t.viscous = p.damping * s.speed;
  if (s.speed > 0.0) {
    t.load = p.load_torque;
  } else if (s.speed < 0.0) {
    t.load = -p.load_torque;
  }
  return t;
}

MotorDerivatives derivatives(const MotorParams& p, const MotorState& s,
                             double voltage) {
  MotorDerivatives d;
  d.current_rate =
      (voltage - p.resistance * s.current - p.motor_constant * s.speed) /
      p.inductance;
  d.speed_rate = torque_terms(p, s).net() / p.inertia;
  return d;
}

MotorState step(const MotorParams& p, const MotorState& s, double voltage,
                double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCategory::step_size,
                fmt::format("motor step size must be positive (got {})", dt));
  }
  auto advance = [](const MotorState& base, const MotorDerivatives& d,
                    double h) {
    return MotorState{base.current + h * d.current_rate,
                      base.speed + h * d.speed_rate};
  };
  const MotorDerivatives k1 = derivatives(p, s, voltage);
  const MotorDerivatives k2 = derivatives(p, advance(s, k1, dt / 2), voltage);
  const MotorDerivatives k3 = derivatives(p, advance(s, k2, dt / 2), voltage);
  const MotorDerivatives k4 = derivatives(p, advance(s, k3, dt), voltage);

  MotorState next;
  next.current = s.current + dt / 6.0 *
                                 (k1.current_rate + 2.0 * k2.current_rate +
                                  2.0 * k3.current_rate + k4.current_rate);
  next.speed = s.speed + dt / 6.0 *
                             (k1.speed_rate + 2.0 * k2.speed_rate +
                              2.0 * k3.speed_rate + k4.speed_rate);
  if (!std::isfinite(next.current) || !std::isfinite(next.speed)) {
    throw Error(ErrorCategory::divergence,
                fmt::format("motor RK4 step (dt={}, V={}) from I={}, w={} "
                            "produced a non-finite state",
                            dt, voltage, s.current, s.speed));
  }
  return next;
}

double steady_state_speed(const MotorParams& p, double voltage) {
  const double k = p.motor_constant;
  return (k * voltage - p.resistance * p.load_torque) /
         (k * k + p.resistance * p.damping);
}

double stored_energy(const MotorParams& p, const MotorState& s) {
  return 0.5 * (p.inertia * s.speed * s.speed +
                p.inductance * s.current * s.current);
}

void validate(const RegulatorGains& g, const char* prefix) {
  if (!std::isfinite(g.kp) || !std::isfinite(g.ki) || g.kp < 0.0 || g.ki < 0.0) {
    throw ValidationError(fmt::format("{}.kp/ki", prefix),
                          "gains must be finite and non-negative");
  }
  if (!std::isfinite(g.v_min) || !std::isfinite(g.v_max) || !(g.v_min < g.v_max)) {
    throw ValidationError(fmt::format("{}.v_min/v_max", prefix),
                          fmt::format("requires v_min < v_max (got {}, {})",
                                      g.v_min, g.v_max));
  }
}

RegulatorOutput regulator_step(const RegulatorState& reg, double setpoint,
                               double measured, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCategory::step_size,
                fmt::format("regulator step size must be positive (got {})", dt));
  }
  const RegulatorGains& g = reg.gains;
  const double error = setpoint - measured;
  const double integral = reg.integral + error * dt;
  const double unclamped = g.kp * error + g.ki * integral;

  RegulatorOutput out;
  out.next = reg;
  if (unclamped > g.v_max || unclamped < g.v_min) {
    out.saturated = true;
    out.voltage = std::clamp(g.kp * error + g.ki * reg.integral, g.v_min, g.v_max);
  } else {
    out.voltage = unclamped;
    out.next.integral = integral;
  }
  return out;
}

}  // namespace epidrive
