#include <cmath>

#include <doctest.h>

#include "epidrive/error.hpp"
#include "epidrive/gear_train.hpp"
#include "epidrive/scenario.hpp"
#include "epidrive/sim.hpp"

using namespace epidrive;

namespace {

Trace run_file(const char* name) {
  return run(load_scenario(std::string(EPIDRIVE_DATA_DIR) + "/scenarios/" + name + ".yaml"));
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("one tick from rest: wheels still, engine starts spinning up") {
  const Simulator sim{PlantConfig{}};
  const TickResult r = sim.tick(sim.initial_state(), PedalState{}, 1e-3);
  CHECK(r.state.time == 1e-3);
  CHECK(r.state.tick_count == 1);
  // The motor follows the balance one tick behind the engine.
  CHECK(std::abs(r.sample.omega_arm) < 1e-3);
  CHECK(r.sample.engine_voltage > 0.0);
  CHECK(r.state.engine.current > 0.0);
  CHECK(r.sample.mode == DriveMode::idle);
}

TEST_CASE("tick errors") {
  const Simulator sim{PlantConfig{}};
  try {
    sim.tick(sim.initial_state(), PedalState{}, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::step_size);
  }
  CHECK_THROWS_AS(sim.tick(sim.initial_state(), PedalState{2.0, 0.0}, 1e-3), ValidationError);
}

TEST_CASE("divergence carries the tick time") {
  const Simulator sim{PlantConfig{}};
  VehicleState s = sim.initial_state();
  s.tick_count = 41;
  s.engine.speed = 1e307;
  try {
    sim.tick(s, PedalState{}, 1e-3);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.time() == doctest::Approx(0.042));
    CHECK(e.category() == ErrorCategory::divergence);
  }
}

TEST_CASE("converged idle balances the wheels") {
  const Simulator sim{PlantConfig{}};
  VehicleState s = sim.initial_state();
  for (int i = 0; i < 5000; ++i) s = sim.tick(s, PedalState{}, 1e-3).state;
  const double ratio = s.dc_motor.speed / s.engine.speed;
  CHECK(ratio == doctest::Approx(-39.0 / 71.0).epsilon(0.01));
  CHECK(std::abs(s.omega_arm) < 0.5);
  CHECK(std::abs(s.dc_motor.speed + 39.0 / 71.0 * s.engine.speed) / std::abs(s.engine.speed) <
        0.02);
}

TEST_CASE("ignition off keeps everything at rest") {
  const Simulator sim{PlantConfig{}};
  VehicleState s = sim.initial_state();
  PedalState off{0.5, 0.0, false, false};
  for (int i = 0; i < 500; ++i) {
    const TickResult r = sim.tick(s, off, 1e-3);
    s = r.state;
    REQUIRE(r.sample.mode == DriveMode::off);
  }
  CHECK(s.engine.speed == 0.0);
  CHECK(s.dc_motor.speed == 0.0);
}

TEST_CASE("reverse from idle runs the wheels backwards") {
  const Simulator sim{PlantConfig{}};
  VehicleState s = sim.initial_state();
  for (int i = 0; i < 3000; ++i) s = sim.tick(s, PedalState{}, 1e-3).state;
  double prev = s.omega_arm;
  int decreasing = 0;
  for (int i = 1; i <= 2000; ++i) {
    const double accel = std::min(0.5, i * 0.5 / 1000.0);
    s = sim.tick(s, PedalState{accel, 0.0, true, true}, 1e-3).state;
    if (s.omega_arm < prev) ++decreasing;
    prev = s.omega_arm;
  }
  CHECK(s.direction == -1);
  CHECK(s.omega_arm < -1.0);
  CHECK(decreasing > 1500);
}

TEST_CASE("direction latches only at zero demand") {
  const Simulator sim{PlantConfig{}};
  VehicleState s = sim.initial_state();
  for (int i = 1; i <= 3000; ++i) {
    s = sim.tick(s, PedalState{std::min(0.5, i / 2000.0), 0.0}, 1e-3).state;
  }
  REQUIRE(s.wheel_demand > 0.0);
  s = sim.tick(s, PedalState{0.5, 0.0, true, true}, 1e-3).state;
  CHECK(s.direction == 1);
}

TEST_CASE("kinematic consistency on every sample of every shipped scenario") {
  const GearTrainSpec spec;
  const MixCoefficients c = coefficients(spec);
  for (const char* name : {"idle", "accelerate", "cruise", "decelerate", "stop", "reverse"}) {
    CAPTURE(name);
    const Trace t = run_file(name);
    REQUIRE_FALSE(t.samples.empty());
    double prev = 0.0;
    for (const TraceSample& s : t.samples) {
      REQUIRE(std::abs(s.omega_arm - (c.motor * s.omega_motor + c.engine * s.omega_engine)) <
              1e-9);
      REQUIRE(s.time > prev);
      prev = s.time;
    }
  }
}

TEST_CASE("zero-duration scenario gives an empty trace") {
  ScenarioSpec spec;
  spec.name = "empty";
  spec.duration = 0.0;
  const Trace t = run(spec);
  CHECK(t.samples.empty());
  CHECK(t.scenario == "empty");
}

TEST_CASE("runs are bit-deterministic") {
  const Trace a = run_file("decelerate");
  const Trace b = run_file("decelerate");
  CHECK(a == b);
}

TEST_CASE("rounded table gains only through the override flag") {
  PlantConfig cfg;
  cfg.rounded_gains = BlockGains{0.35, 0.64, -0.55};
  CHECK_THROWS_AS(Simulator{cfg}, Error);
  cfg.allow_rounded_gains = true;
  const Simulator sim{cfg};
  CHECK(sim.gear().uses_override());
  CHECK(sim.gear().gains().idle_coupling == -0.55);
}

TEST_CASE("block diagram has no brake actuator") {
  const Simulator sim{PlantConfig{}};
  for (const Block& b : sim.block_diagram()) {
    if (b.name.find("brake") != std::string::npos) {
      CHECK(b.name == "brake_pedal");
      for (const std::string& f : b.feeds) {
        CHECK((f == "pedal_rate_estimator" || f == "fuzzy_controller"));
      }
    }
  }
}

}  // TEST_SUITE
