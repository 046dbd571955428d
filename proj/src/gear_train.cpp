#include "epidrive/gear_train.hpp"

#include <cmath>

#include <fmt/format.h>

#include "epidrive/error.hpp"

namespace epidrive {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCategory::numeric_input,
                fmt::format("{} must be finite (got {})", name, value));
  }
}

}  // namespace

void validate(const GearTrainSpec& spec) {
  auto check_teeth = [](int teeth, const char* name) {
    if (teeth < 4) {
      throw Error(ErrorCategory::config,
                  fmt::format("gear.{} must be at least 4 teeth (got {})",
                              name, teeth));
    }
  };
  check_teeth(spec.n_sun, "n_sun");
  check_teeth(spec.n_ring, "n_ring");
  if (spec.enforce_mesh) {
    check_teeth(spec.n_planet, "n_planet");
    if (spec.n_ring != spec.n_sun + 2 * spec.n_planet) {
      throw Error(ErrorCategory::config,
                  fmt::format("gear mesh condition n_ring = n_sun + 2*n_planet "
                              "violated ({} != {} + 2*{})",
                              spec.n_ring, spec.n_sun, spec.n_planet));
    }
  }
}

MixCoefficients coefficients(const GearTrainSpec& spec) {
  validate(spec);
  const double engine = static_cast<double>(spec.n_sun) /
                        static_cast<double>(spec.n_sun + spec.n_ring);
  return {engine, 1.0 - engine};
}

double wheel_speed(const MixCoefficients& mix, double omega_engine,
                   double omega_motor) {
  require_finite(omega_engine, "omega_engine");
  require_finite(omega_motor, "omega_motor");
  return mix.motor * omega_motor + mix.engine * omega_engine;
}

double wheel_speed(const GearTrainSpec& spec, double omega_engine,
                   double omega_motor) {
  return wheel_speed(coefficients(spec), omega_engine, omega_motor);
}

double motor_speed_for(const GearTrainSpec& spec, double omega_arm_target,
                       double omega_engine) {
  require_finite(omega_arm_target, "omega_arm_target");
  require_finite(omega_engine, "omega_engine");
  const MixCoefficients mix = coefficients(spec);
  return (omega_arm_target - mix.engine * omega_engine) / mix.motor;
}

double train_residual(const GearTrainSpec& spec, double omega_engine,
                      double omega_motor, double omega_arm) {
  validate(spec);
  require_finite(omega_engine, "omega_engine");
  require_finite(omega_motor, "omega_motor");
  require_finite(omega_arm, "omega_arm");
  if (omega_engine == omega_arm) {
    throw Error(ErrorCategory::degenerate_ratio,
                "train residual undefined: omega_engine equals omega_arm");
  }
  return (omega_motor - omega_arm) / (omega_engine - omega_arm) +
         static_cast<double>(spec.n_sun) / static_cast<double>(spec.n_ring);
}

double idle_coupling(const GearTrainSpec& spec) {
  validate(spec);
  return -static_cast<double>(spec.n_sun) / static_cast<double>(spec.n_ring);
}

BlockGains exact_gains(const GearTrainSpec& spec) {
  const MixCoefficients mix = coefficients(spec);
  return {mix.engine, mix.motor, idle_coupling(spec)};
}

GearTrain::GearTrain(GearTrainSpec spec, std::optional<BlockGains> override_gains)
    : spec_(spec), gains_(exact_gains(spec)) {
  if (override_gains) {
    const BlockGains& g = *override_gains;
    if (!std::isfinite(g.engine) || !std::isfinite(g.motor) ||
        !std::isfinite(g.idle_coupling) || g.engine <= 0.0 || g.motor <= 0.0) {
      throw Error(ErrorCategory::config,
                  "gear.rounded_gains must be finite with positive gain1/gain2");
    }
    gains_ = g;
    overridden_ = true;
  }
}

}  // namespace epidrive
