#include <cmath>

#include <doctest.h>

#include "epidrive/controller.hpp"
#include "epidrive/error.hpp"
#include "epidrive/rule_file.hpp"

using namespace epidrive;

namespace {

// Output term whose peak lies closest to value.
std::string nearest_term(const fuzzy::FuzzyVariable& v, double value) {
  std::string best;
  double gap = 1e300;
  for (const auto& t : v.terms()) {
    if (std::abs(t.b - value) < gap) {
      gap = std::abs(t.b - value);
      best = t.name;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("controller") {

TEST_CASE("pedal validation") {
  CHECK_NOTHROW(validate(PedalState{0.0, 1.0}));
  CHECK_THROWS_AS(validate(PedalState{-0.1, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate(PedalState{0.0, 1.5}), ValidationError);
  CHECK_THROWS_AS(validate(PedalState{std::nan(""), 0.0}), ValidationError);
}

TEST_CASE("rule base must provide the pedal signals") {
  const fuzzy::RuleBase rb = parse_rule_base(
      "input accel 0 1\n term a 0 0 1\nend\noutput engine_v 0 1\n term b 0 1 1\nend\n"
      "IF accel IS a THEN engine_v IS b\n");
  CHECK_THROWS_AS(PedalController{rb}, ValidationError);
}

TEST_CASE("untouched pedals: engine idles and the motor holds the balance") {
  const PedalController c = PedalController::shipped();
  const ControlCommand cmd = controller_step(c, PedalState{}, PedalRates{}, 0.0);
  CHECK_FALSE(cmd.no_fire());
  const double cell = 10.0 / 200.0;
  CHECK(std::abs(cmd.engine_voltage - c.term_peak("engine_v", "idle")) <= cell);
  // A non-positive motor command keeps the wheel demand at zero, i.e. the
  // motor setpoint stays on the idle coupling.
  CHECK(cmd.motor_voltage <= 0.0);
}

TEST_CASE("fast accelerator press commands the high motor voltage") {
  const PedalController c = PedalController::shipped();
  const auto& motor_v = c.rules().outputs()[c.rules().find_output("motor_v")];
  for (double accel : {0.0, 0.2, 0.5}) {
    for (double fb : {0.0, 0.2}) {
      const ControlCommand cmd = controller_step(c, {accel, 0.0}, {2.0, 0.0}, fb);
      CAPTURE(accel);
      CAPTURE(fb);
      CHECK(nearest_term(motor_v, cmd.motor_voltage) == "high");
      CHECK(cmd.motor_voltage > c.term_peak("motor_v", "medium"));
    }
  }
}

TEST_CASE("held brake drives the commands toward the stop condition") {
  const PedalController c = PedalController::shipped();
  for (double brake : {0.5, 0.8, 1.0}) {
    for (double fb : {0.6, 0.3, 0.0}) {
      const ControlCommand cmd = controller_step(c, {0.0, brake}, {0.0, 0.0}, fb);
      CAPTURE(brake);
      CAPTURE(fb);
      CHECK(cmd.motor_voltage < 0.0);  // the wheel demand shrinks
      // Near standstill the engine is back at idle.
      if (fb < 0.5) {
        CHECK(std::abs(cmd.engine_voltage - c.term_peak("engine_v", "idle")) <= 0.05);
      }
    }
  }
}

TEST_CASE("motor command is non-decreasing in accelerator rate with brake released") {
  const PedalController c = PedalController::shipped();
  for (double accel : {0.0, 0.3, 0.7, 1.0}) {
    for (double fb : {-0.5, 0.0, 0.4, 0.9}) {
      double prev = -1e300;
      for (int i = 0; i <= 300; ++i) {
        const double rate = 2.0 * i / 300.0;
        const double v = controller_step(c, {accel, 0.0}, {rate, 0.0}, fb).motor_voltage;
        REQUIRE(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("identical inputs give bit-identical commands") {
  const PedalController c = PedalController::shipped();
  const ControlCommand a = c.step({0.37, 0.12}, {0.8, -0.2}, 0.31);
  const ControlCommand b = c.step({0.37, 0.12}, {0.8, -0.2}, 0.31);
  CHECK(a.engine_voltage == b.engine_voltage);
  CHECK(a.motor_voltage == b.motor_voltage);
}

TEST_CASE("term_peak lookups") {
  const PedalController c = PedalController::shipped();
  CHECK(c.term_peak("engine_v", "idle") == 2.5);
  CHECK(c.term_peak("motor_v", "high") == 7.5);
  CHECK_THROWS_AS(c.term_peak("engine_v", "warp"), Error);
  CHECK_THROWS_AS(c.term_peak("nope", "idle"), Error);
}

}  // TEST_SUITE
