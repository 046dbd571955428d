#pragma once

// Independent reference implementations used to derive expected values.
// None of these call into epidrive; they re-derive the mathematics from
// first principles with different numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

// Exact rational arithmetic on 64-bit integers.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalise(); }

  void normalise() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Fraction operator+(Fraction a, Fraction b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend Fraction operator-(Fraction a, Fraction b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
};

// Wheel speed from tooth counts by exact rationals.
inline Fraction wheel_speed(int n_sun, int n_ring, Fraction w_engine, Fraction w_motor) {
  const Fraction ce(n_sun, n_sun + n_ring);
  const Fraction cm(n_ring, n_sun + n_ring);
  return cm * w_motor + ce * w_engine;
}

struct Motor {
  double J, b, k, R, L, T;
};

struct MotorSample {
  double current;
  double speed;
};

// Semi-implicit (symplectic) Euler of the armature model: explicit and first
// order, with the speed update using the freshly updated current. On these
// lightly damped motors it does not accumulate the amplitude drift of plain
// forward Euler. If peak is given it receives the largest |current| and
// |speed| along the way.
inline MotorSample euler(const Motor& m, MotorSample s, double voltage, double dt,
                         long steps, MotorSample* peak = nullptr) {
  for (long i = 0; i < steps; ++i) {
    if (peak) {
      peak->current = std::max(peak->current, std::abs(s.current));
      peak->speed = std::max(peak->speed, std::abs(s.speed));
    }
    const double sgn = s.speed > 0.0 ? 1.0 : (s.speed < 0.0 ? -1.0 : 0.0);
    s.current += dt * (voltage - m.R * s.current - m.k * s.speed) / m.L;
    s.speed += dt * (m.k * s.current - m.b * s.speed - m.T * sgn) / m.J;
  }
  return s;
}

// Equilibrium with positive speed: k*I = b*w + T and V = R*I + k*w.
inline double steady_speed(const Motor& m, double voltage) {
  return (m.k * voltage - m.R * m.T) / (m.k * m.k + m.R * m.b);
}

inline double triangle(double a, double b, double c, double x) {
  if (x < a || x > c) return 0.0;
  if (x == b) return 1.0;
  if (x < b) return (b > a) ? (x - a) / (b - a) : 1.0;
  return (c > b) ? (c - x) / (c - b) : 1.0;
}

// Centroid of a membership curve mu on [lo, hi] by composite Simpson
// quadrature on n (even) panels. Returns NaN if the area vanishes.
template <class Mu>
double centroid(Mu mu, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double area = 0.0, moment = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + h * i;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double y = mu(x);
    area += w * y;
    moment += w * x * y;
  }
  return area > 0.0 ? moment / area : std::nan("");
}

}  // namespace oracle
