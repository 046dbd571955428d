#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "epidrive/error.hpp"
#include "epidrive/gear_train.hpp"
#include "oracles.hpp"

using namespace epidrive;
using oracle::Fraction;

namespace {

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  return static_cast<ErrorCategory>(0);
}

}  // namespace

TEST_SUITE("gear_train") {

TEST_CASE("coefficients match exact tooth-count fractions") {
  const GearTrainSpec spec;
  const MixCoefficients c = coefficients(spec);
  CHECK(c.engine == Fraction(39, 110).value());
  CHECK(c.motor == Fraction(71, 110).value());
  CHECK(c.engine + c.motor == 1.0);
  CHECK(0.0 < c.engine);
  CHECK(c.engine < c.motor);
  CHECK(c.motor < 1.0);
}

TEST_CASE("symmetric counts without mesh give equal halves") {
  GearTrainSpec spec{50, 0, 50, false};
  const MixCoefficients c = coefficients(spec);
  CHECK(c.engine == 0.5);
  CHECK(c.motor == 0.5);
}

TEST_CASE("wheel_speed examples") {
  const GearTrainSpec spec;
  const Fraction expect = oracle::wheel_speed(39, 71, Fraction(110), Fraction(0));
  CHECK(expect == Fraction(39));
  CHECK(wheel_speed(spec, 110.0, 0.0) == doctest::Approx(expect.value()).epsilon(1e-15));
  CHECK(std::abs(wheel_speed(spec, 71.0, -39.0)) < 1e-12);
  CHECK(wheel_speed(spec, 100.0, 100.0) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("motor_speed_for examples") {
  const GearTrainSpec spec;
  const Fraction expect = Fraction(-100) * Fraction(39, 71);
  CHECK(motor_speed_for(spec, 0.0, 100.0) == doctest::Approx(expect.value()).epsilon(1e-14));
  CHECK(motor_speed_for(spec, 0.0, 100.0) == doctest::Approx(-54.9295774647887));
  CHECK(motor_speed_for(spec, 0.0, 0.0) == 0.0);
  CHECK(std::abs(motor_speed_for(spec, 39.0, 110.0)) < 1e-12);
}

TEST_CASE("train_residual examples") {
  const GearTrainSpec spec;
  const Fraction expect = Fraction(1) + Fraction(39, 71);
  CHECK(train_residual(spec, 1.0, 1.0, 0.0) ==
        doctest::Approx(expect.value()).epsilon(1e-15));
  CHECK(category_of([&] { train_residual(spec, 3.0, 1.0, 3.0); }) ==
        ErrorCategory::degenerate_ratio);
}

TEST_CASE("non-finite inputs are rejected") {
  const GearTrainSpec spec;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(category_of([&] { wheel_speed(spec, nan, 0.0); }) == ErrorCategory::numeric_input);
  CHECK(category_of([&] { wheel_speed(spec, 0.0, inf); }) == ErrorCategory::numeric_input);
  CHECK(category_of([&] { motor_speed_for(spec, inf, 1.0); }) ==
        ErrorCategory::numeric_input);
}

TEST_CASE("mesh check and tooth bounds") {
  CHECK_NOTHROW(validate(GearTrainSpec{39, 16, 71, true}));
  CHECK(category_of([] { validate(GearTrainSpec{40, 16, 71, true}); }) ==
        ErrorCategory::config);
  CHECK(category_of([] { validate(GearTrainSpec{3, 34, 71, true}); }) ==
        ErrorCategory::config);
  CHECK(category_of([] { coefficients(GearTrainSpec{40, 16, 71, true}); }) ==
        ErrorCategory::config);
  CHECK_NOTHROW(coefficients(GearTrainSpec{40, 16, 71, false}));
}

TEST_CASE("idle coupling and block gains") {
  const GearTrainSpec spec;
  CHECK(idle_coupling(spec) == Fraction(-39, 71).value());
  const BlockGains g = exact_gains(spec);
  CHECK(g.engine == coefficients(spec).engine);
  CHECK(g.motor == coefficients(spec).motor);
  CHECK(g.idle_coupling == idle_coupling(spec));

  const GearTrain exact(spec);
  CHECK_FALSE(exact.uses_override());
  CHECK(exact.gains() == g);
  CHECK(std::abs(exact.wheel_speed(100.0, exact.balance_speed(100.0))) < 1e-12);

  const GearTrain rounded(spec, BlockGains{0.35, 0.64, -0.55});
  CHECK(rounded.uses_override());
  CHECK(rounded.wheel_speed(1.0, 1.0) == doctest::Approx(0.99));
}

TEST_CASE("properties over random draws") {
  const GearTrainSpec spec;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> speed(-100.0, 100.0);
  std::uniform_real_distribution<double> scalar(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = speed(rng), y = speed(rng), u = speed(rng), v = speed(rng);
    const double a = scalar(rng), b = scalar(rng);
    const double lhs = wheel_speed(spec, a * x + b * y, a * u + b * v);
    const double rhs = a * wheel_speed(spec, x, u) + b * wheel_speed(spec, y, v);
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));

    const double target = speed(rng);
    REQUIRE(std::abs(wheel_speed(spec, x, motor_speed_for(spec, target, x)) - target) <
            1e-12 * std::max(1.0, std::abs(target)));

    // The ratio form loses digits as omega2 approaches omega5 (its pole);
    // keep the pair at least 1 rad/s apart.
    if (std::abs(x - u) < 1.0) continue;
    const double arm = wheel_speed(spec, x, u);
    REQUIRE(std::abs(train_residual(spec, x, u, arm)) < 1e-12);
  }
}

}  // TEST_SUITE
