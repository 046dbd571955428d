#include "epidrive/controller.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "epidrive/error.hpp"
#include "epidrive/rule_file.hpp"

namespace epidrive {

void validate(const PedalState& p) {
  auto check = [](double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError(field, fmt::format("must lie in [0, 1] (got {})", v));
    }
  };
  check(p.accel, "pedals.accel");
  check(p.brake, "pedals.brake");
}

PedalController::PedalController(fuzzy::RuleBase rules, std::size_t grid_points)
    : rules_(std::move(rules)), grid_points_(grid_points) {
  if (grid_points_ < 2) {
    throw ValidationError("controller.defuzz_grid", "needs at least 2 points");
  }
  auto input = [this](const char* name) {
    const std::size_t i = rules_.find_input(name);
    if (i == fuzzy::FuzzyVariable::npos) {
      throw ValidationError("rule_base", fmt::format("missing input '{}'", name));
    }
    return i;
  };
  auto output = [this](const char* name) {
    const std::size_t i = rules_.find_output(name);
    if (i == fuzzy::FuzzyVariable::npos) {
      throw ValidationError("rule_base", fmt::format("missing output '{}'", name));
    }
    return i;
  };
  in_accel_ = input("accel");
  in_accel_rate_ = input("accel_rate");
  in_brake_ = input("brake");
  in_brake_rate_ = input("brake_rate");
  in_fb_ = input("motor_fb");
  out_engine_ = output("engine_v");
  out_motor_ = output("motor_v");
  if (rules_.inputs().size() != 5) {
    throw ValidationError("rule_base", "pedal controller takes exactly 5 inputs");
  }
}

PedalController PedalController::shipped() {
  return PedalController(parse_rule_base(shipped_rule_text(), "pedal_controller.rules"));
}

ControlCommand PedalController::step(const PedalState& pedals,
                                     const PedalRates& rates,
                                     double motor_speed_feedback) const {
  std::array<double, 5> crisp{};
  crisp[in_accel_] = pedals.accel;
  crisp[in_accel_rate_] = rates.accel;
  crisp[in_brake_] = pedals.brake;
  crisp[in_brake_rate_] = rates.brake;
  crisp[in_fb_] = motor_speed_feedback;

  const std::vector<fuzzy::SampledSet> sets = fuzzy::infer(rules_, crisp, grid_points_);
  const fuzzy::Defuzzified engine = fuzzy::defuzzify(sets[out_engine_]);
  const fuzzy::Defuzzified motor = fuzzy::defuzzify(sets[out_motor_]);
  return {engine.value, motor.value, engine.no_fire, motor.no_fire};
}

double PedalController::term_peak(const char* output, const char* term) const {
  const std::size_t o = rules_.find_output(output);
  if (o == fuzzy::FuzzyVariable::npos) {
    throw Error(ErrorCategory::inference, fmt::format("no output '{}'", output));
  }
  const std::size_t t = rules_.outputs()[o].find_term(term);
  if (t == fuzzy::FuzzyVariable::npos) {
    throw Error(ErrorCategory::inference,
                fmt::format("output '{}' has no term '{}'", output, term));
  }
  return rules_.outputs()[o].terms()[t].b;
}

ControlCommand controller_step(const PedalController& controller,
                               const PedalState& pedals, const PedalRates& rates,
                               double motor_speed_feedback) {
  return controller.step(pedals, rates, motor_speed_feedback);
}

}  // namespace epidrive
