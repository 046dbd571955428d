#pragma once

// Armature-controlled DC motor:
//
//   L dI/dt = V - R I - k w
//   J dw/dt = k I - b w - T sign(w)
//
// The same constant k serves as torque constant and back-EMF constant. The
// load T is a Coulomb-style torque opposing motion and vanishes at w = 0.

namespace epidrive {

struct MotorParams {
  double inertia = 0.01;        // J, N*m*s^2/rad
  double damping = 0.1;         // b, N*m*s/rad
  double motor_constant = 10.0; // k, N*m/A and V*s/rad
  double resistance = 1.0;      // R, ohm
  double inductance = 0.5;      // L, H
  double load_torque = 0.001;   // T, N*m

  friend bool operator==(const MotorParams&, const MotorParams&) = default;
};

// Engine stand-in motor (k = 10) and traction DC motor (k = 8).
MotorParams engine_motor_defaults();
MotorParams dc_motor_defaults();

void validate(const MotorParams& params, const char* field_prefix = "motor");

struct MotorState {
  double current = 0.0;  // A
  double speed = 0.0;    // rad/s
};

struct MotorDerivatives {
  double current_rate = 0.0;  // A/s
  double speed_rate = 0.0;    // rad/s^2
};

// Torque contributions acting on the rotor. There is deliberately no brake
// entry: the drivetrain has no friction brake anywhere.
struct TorqueTerms {
  double electromagnetic = 0.0;
  double viscous = 0.0;
  double load = 0.0;

  double net() const noexcept { return electromagnetic - viscous - load; }
};

TorqueTerms torque_terms(const MotorParams& params, const MotorState& state);

MotorDerivatives derivatives(const MotorParams& params, const MotorState& state,
                             double voltage);

// One classical RK4 step with the voltage held over the step.
MotorState step(const MotorParams& params, const MotorState& state,
                double voltage, double dt);

// Positive-speed equilibrium (k V - R T) / (k^2 + R b).
double steady_state_speed(const MotorParams& params, double voltage);

// Stored magnetic plus kinetic energy, (J w^2 + L I^2) / 2.
double stored_energy(const MotorParams& params, const MotorState& state);

struct RegulatorGains {
  double kp = 5.0;        // V*s/rad
  double ki = 60.0;       // V/rad
  double v_min = -1200.0; // V
  double v_max = 1200.0;  // V

  friend bool operator==(const RegulatorGains&, const RegulatorGains&) = default;
};

void validate(const RegulatorGains& gains, const char* field_prefix = "regulator");

struct RegulatorState {
  RegulatorGains gains;
  double integral = 0.0;  // accumulated speed error, rad
};

struct RegulatorOutput {
  double voltage = 0.0;
  RegulatorState next;
  bool saturated = false;
};

// PI speed regulator. The integral is frozen on saturated steps.
RegulatorOutput regulator_step(const RegulatorState& reg, double speed_setpoint,
                               double speed_measured, double dt);

}  // namespace epidrive
