#pragma once

#include <cstddef>

#include "epidrive/fuzzy.hpp"

namespace epidrive {

struct PedalState {
  double accel = 0.0;  // fraction of travel, [0, 1]
  double brake = 0.0;  // fraction of travel, [0, 1]
  bool reverse = false;
  bool ignition = true;

  friend bool operator==(const PedalState&, const PedalState&) = default;
};

// Throws ValidationError for positions outside [0, 1] or non-finite values.
void validate(const PedalState& pedals);

struct PedalRates {
  double accel = 0.0;  // 1/s
  double brake = 0.0;  // 1/s
};

struct ControlCommand {
  double engine_voltage = 0.0;
  double motor_voltage = 0.0;
  bool engine_no_fire = false;
  bool motor_no_fire = false;

  bool no_fire() const noexcept { return engine_no_fire || motor_no_fire; }
};

// Binds a rule base to the pedal-controller signal names:
// inputs accel, accel_rate, brake, brake_rate, motor_fb and outputs
// engine_v, motor_v.
class PedalController {
 public:
  explicit PedalController(fuzzy::RuleBase rules,
                           std::size_t grid_points = fuzzy::kDefaultGridPoints);

  // The canonical 24-rule controller.
  static PedalController shipped();

  const fuzzy::RuleBase& rules() const noexcept { return rules_; }
  std::size_t grid_points() const noexcept { return grid_points_; }

  // motor_speed_feedback is normalised (1 = rated wheel speed) and signed
  // along the selected travel direction. The reverse bit is not consulted.
  ControlCommand step(const PedalState& pedals, const PedalRates& rates,
                      double motor_speed_feedback) const;

  // Peak of the named output term, e.g. ("engine_v", "idle").
  double term_peak(const char* output, const char* term) const;

 private:
  fuzzy::RuleBase rules_;
  std::size_t grid_points_;
  std::size_t in_accel_, in_accel_rate_, in_brake_, in_brake_rate_, in_fb_;
  std::size_t out_engine_, out_motor_;
};

ControlCommand controller_step(const PedalController& controller,
                               const PedalState& pedals, const PedalRates& rates,
                               double motor_speed_feedback);

}  // namespace epidrive
