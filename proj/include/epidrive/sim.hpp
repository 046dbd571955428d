#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epidrive/controller.hpp"
#include "epidrive/gear_train.hpp"
#include "epidrive/motor.hpp"

namespace epidrive {

struct ControllerConfig {
  // "builtin" selects the shipped rule base; anything else is a file path.
  std::string rule_base = "builtin";
  int defuzz_grid = 201;
  double engine_speed_per_volt = 4.0;  // rad/s per V of engine command
  double wheel_accel_per_volt = 6.0;   // rad/s^2 of wheel demand per V of motor command
  double rated_wheel_speed = 20.0;     // rad/s, normalises the motor feedback
  double max_wheel_speed = 40.0;       // rad/s, demand ceiling
  double rate_filter_tau = 0.05;       // s, pedal-rate smoothing
  double engine_setpoint_tau = 0.2;    // s, engine setpoint smoothing

  friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

struct PlantConfig {
  GearTrainSpec gear;
  bool allow_rounded_gains = false;
  std::optional<BlockGains> rounded_gains;
  MotorParams engine = engine_motor_defaults();
  MotorParams dc_motor = dc_motor_defaults();
  RegulatorGains engine_regulator;
  RegulatorGains motor_regulator;
  ControllerConfig controller;

  friend bool operator==(const PlantConfig&, const PlantConfig&) = default;
};

// Throws ValidationError / Error(config) naming the offending field.
void validate(const PlantConfig& config);

enum class DriveMode { off, idle, forward, reverse };

const char* mode_name(DriveMode mode) noexcept;

struct VehicleState {
  double time = 0.0;
  MotorState engine;
  MotorState dc_motor;
  double omega_arm = 0.0;
  RegulatorState engine_regulator;
  RegulatorState motor_regulator;
  PedalState last_pedals{0.0, 0.0, false, false};
  PedalRates rates;              // smoothed pedal velocities
  double engine_setpoint = 0.0;  // smoothed, rad/s
  double wheel_demand = 0.0;     // rad/s along `direction`, never negative
  int direction = 1;             // +1 forward, -1 reverse; changes only at rest
  long long tick_count = 0;
};

struct TraceSample {
  double time = 0.0;
  double accel = 0.0;
  double brake = 0.0;
  bool reverse = false;
  bool ignition = false;
  double accel_rate = 0.0;
  double brake_rate = 0.0;
  double engine_voltage = 0.0;  // armature voltage applied, V
  double motor_voltage = 0.0;
  double omega_engine = 0.0;    // sun gear
  double omega_motor = 0.0;     // ring gear
  double omega_arm = 0.0;       // carrier / wheels
  double flc_engine = 0.0;      // raw controller outputs, V
  double flc_motor = 0.0;
  bool no_fire = false;
  double engine_setpoint = 0.0;
  double motor_setpoint = 0.0;
  double wheel_demand = 0.0;
  DriveMode mode = DriveMode::off;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct Trace {
  std::string scenario;
  double dt = 0.0;
  std::vector<TraceSample> samples;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct TickResult {
  VehicleState state;
  TraceSample sample;
};

// One block of the simulated diagram and the blocks it feeds.
struct Block {
  std::string name;
  std::vector<std::string> feeds;
};

class Simulator {
 public:
  Simulator(PlantConfig config, PedalController controller);
  // Loads the rule base named by config.controller.rule_base.
  explicit Simulator(PlantConfig config);

  const PlantConfig& config() const noexcept { return config_; }
  const GearTrain& gear() const noexcept { return gear_; }
  const PedalController& controller() const noexcept { return controller_; }

  VehicleState initial_state() const;

  TickResult tick(const VehicleState& state, const PedalState& pedals,
                  double dt) const;

  std::vector<Block> block_diagram() const;

 private:
  PlantConfig config_;
  GearTrain gear_;
  PedalController controller_;
};

PedalController make_controller(const ControllerConfig& config);

}  // namespace epidrive
