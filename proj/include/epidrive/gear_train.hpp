#pragma once

// Speed kinematics of the two-input epicyclic train. The engine drives the
// sun gear (speed omega_engine), the DC motor drives the ring gear
// (omega_motor) and the planet carrier is coupled to the wheels (omega_arm):
//
//   (omega_motor - omega_arm) / (omega_engine - omega_arm) = -n_sun / n_ring
//   omega_arm = c_motor * omega_motor + c_engine * omega_engine
//
// with c_engine = n_sun / (n_sun + n_ring) and c_motor = 1 - c_engine.

#include <optional>

namespace epidrive {

struct GearTrainSpec {
  int n_sun = 39;
  int n_planet = 16;
  int n_ring = 71;
  // Unit tests of the bare formula may switch off the mesh condition
  // n_ring == n_sun + 2 * n_planet; configuration files always keep it.
  bool enforce_mesh = true;

  friend bool operator==(const GearTrainSpec&, const GearTrainSpec&) = default;
};

struct MixCoefficients {
  double engine = 0.0;
  double motor = 0.0;
};

// Throws Error(config) naming the first violated invariant.
void validate(const GearTrainSpec& spec);

MixCoefficients coefficients(const GearTrainSpec& spec);

double wheel_speed(const GearTrainSpec& spec, double omega_engine,
                   double omega_motor);
double wheel_speed(const MixCoefficients& mix, double omega_engine,
                   double omega_motor);

// Motor speed that puts the carrier at omega_arm_target for a given engine speed.
double motor_speed_for(const GearTrainSpec& spec, double omega_arm_target,
                       double omega_engine);

// Zero iff the triple satisfies the ratio form of the train equation.
double train_residual(const GearTrainSpec& spec, double omega_engine,
                      double omega_motor, double omega_arm);

// Ratio omega_motor / omega_engine that holds the wheels still: -n_sun / n_ring.
double idle_coupling(const GearTrainSpec& spec);

// Block-diagram gains. The exact values come from the tooth counts; the
// rounded figures of the original parameter table (0.35, 0.64, -0.55) can be
// substituted only through an explicit override in the configuration.
struct BlockGains {
  double engine = 0.0;         // Gain1
  double motor = 0.0;          // Gain2
  double idle_coupling = 0.0;  // Gain3

  friend bool operator==(const BlockGains&, const BlockGains&) = default;
};

BlockGains exact_gains(const GearTrainSpec& spec);

class GearTrain {
 public:
  explicit GearTrain(GearTrainSpec spec,
                     std::optional<BlockGains> override_gains = std::nullopt);

  const GearTrainSpec& spec() const noexcept { return spec_; }
  const BlockGains& gains() const noexcept { return gains_; }
  bool uses_override() const noexcept { return overridden_; }

  double wheel_speed(double omega_engine, double omega_motor) const noexcept {
    return gains_.motor * omega_motor + gains_.engine * omega_engine;
  }
  double balance_speed(double omega_engine) const noexcept {
    return gains_.idle_coupling * omega_engine;
  }

 private:
  GearTrainSpec spec_;
  BlockGains gains_;
  bool overridden_ = false;
};

}  // namespace epidrive
