// Python bindings: gear kinematics, motor model, pedal controller, scenarios.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "epidrive/controller.hpp"
#include "epidrive/error.hpp"
#include "epidrive/export.hpp"
#include "epidrive/gear_train.hpp"
#include "epidrive/motor.hpp"
#include "epidrive/rule_file.hpp"
#include "epidrive/scenario.hpp"
#include "epidrive/sim.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace epidrive;

namespace {

py::array_t<double> column(const Trace& trace, const std::string& name) {
  double TraceSample::*field = nullptr;
  if (name == "time") field = &TraceSample::time;
  else if (name == "accel") field = &TraceSample::accel;
  else if (name == "brake") field = &TraceSample::brake;
  else if (name == "accel_rate") field = &TraceSample::accel_rate;
  else if (name == "brake_rate") field = &TraceSample::brake_rate;
  else if (name == "engine_voltage") field = &TraceSample::engine_voltage;
  else if (name == "motor_voltage") field = &TraceSample::motor_voltage;
  else if (name == "omega_engine") field = &TraceSample::omega_engine;
  else if (name == "omega_motor") field = &TraceSample::omega_motor;
  else if (name == "omega_arm") field = &TraceSample::omega_arm;
  else if (name == "flc_engine") field = &TraceSample::flc_engine;
  else if (name == "flc_motor") field = &TraceSample::flc_motor;
  else if (name == "engine_setpoint") field = &TraceSample::engine_setpoint;
  else if (name == "motor_setpoint") field = &TraceSample::motor_setpoint;
  else if (name == "wheel_demand") field = &TraceSample::wheel_demand;
  else throw py::key_error("unknown trace column '" + name + "'");

  py::array_t<double> out(static_cast<py::ssize_t>(trace.samples.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = trace.samples[i].*field;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid epicyclic drivetrain with a Mamdani pedal controller";

  static py::exception<Error> error(m, "EpidriveError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("category") = category_name(e.category());
      exc.attr("exit_code") = e.exit_code();
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  // Gear train.
  py::class_<GearTrainSpec>(m, "GearTrainSpec")
      .def(py::init([](int n_sun, int n_planet, int n_ring, bool enforce_mesh) {
             return GearTrainSpec{n_sun, n_planet, n_ring, enforce_mesh};
           }),
           "n_sun"_a = 39, "n_planet"_a = 16, "n_ring"_a = 71, "enforce_mesh"_a = true)
      .def_readwrite("n_sun", &GearTrainSpec::n_sun)
      .def_readwrite("n_planet", &GearTrainSpec::n_planet)
      .def_readwrite("n_ring", &GearTrainSpec::n_ring)
      .def_readwrite("enforce_mesh", &GearTrainSpec::enforce_mesh)
      .def("__eq__", [](const GearTrainSpec& a, const GearTrainSpec& b) { return a == b; })
      .def("__repr__", [](const GearTrainSpec& s) {
        return "GearTrainSpec(n_sun=" + std::to_string(s.n_sun) + ", n_planet=" +
               std::to_string(s.n_planet) + ", n_ring=" + std::to_string(s.n_ring) + ")";
      });

  py::class_<MixCoefficients>(m, "MixCoefficients")
      .def_readonly("engine", &MixCoefficients::engine)
      .def_readonly("motor", &MixCoefficients::motor);

  m.def("validate_gear", py::overload_cast<const GearTrainSpec&>(&validate), "spec"_a);
  m.def("coefficients", &coefficients, "spec"_a = GearTrainSpec{});
  m.def("wheel_speed",
        py::overload_cast<const GearTrainSpec&, double, double>(&wheel_speed), "spec"_a,
        "omega_engine"_a, "omega_motor"_a);
  m.def("motor_speed_for", &motor_speed_for, "spec"_a, "omega_arm_target"_a,
        "omega_engine"_a);
  m.def("train_residual", &train_residual, "spec"_a, "omega_engine"_a, "omega_motor"_a,
        "omega_arm"_a);
  m.def("idle_coupling", &idle_coupling, "spec"_a = GearTrainSpec{});

  // Motor.
  py::class_<MotorParams>(m, "MotorParams")
      .def(py::init<>())
      .def_readwrite("inertia", &MotorParams::inertia)
      .def_readwrite("damping", &MotorParams::damping)
      .def_readwrite("motor_constant", &MotorParams::motor_constant)
      .def_readwrite("resistance", &MotorParams::resistance)
      .def_readwrite("inductance", &MotorParams::inductance)
      .def_readwrite("load_torque", &MotorParams::load_torque);
  m.def("engine_motor_defaults", &engine_motor_defaults);
  m.def("dc_motor_defaults", &dc_motor_defaults);

  py::class_<MotorState>(m, "MotorState")
      .def(py::init([](double current, double speed) { return MotorState{current, speed}; }),
           "current"_a = 0.0, "speed"_a = 0.0)
      .def_readwrite("current", &MotorState::current)
      .def_readwrite("speed", &MotorState::speed)
      .def("__repr__", [](const MotorState& s) {
        return "MotorState(current=" + std::to_string(s.current) +
               ", speed=" + std::to_string(s.speed) + ")";
      });

  m.def(
      "derivatives",
      [](const MotorParams& p, const MotorState& s, double v) {
        const MotorDerivatives d = derivatives(p, s, v);
        return py::make_tuple(d.current_rate, d.speed_rate);
      },
      "params"_a, "state"_a, "voltage"_a, "Returns (dI/dt, dw/dt).");
  m.def("step", &step, "params"_a, "state"_a, "voltage"_a, "dt"_a);
  m.def("steady_state_speed", &steady_state_speed, "params"_a, "voltage"_a);

  // Pedal controller.
  py::class_<PedalState>(m, "PedalState")
      .def(py::init([](double accel, double brake, bool reverse, bool ignition) {
             return PedalState{accel, brake, reverse, ignition};
           }),
           "accel"_a = 0.0, "brake"_a = 0.0, "reverse"_a = false, "ignition"_a = true)
      .def_readwrite("accel", &PedalState::accel)
      .def_readwrite("brake", &PedalState::brake)
      .def_readwrite("reverse", &PedalState::reverse)
      .def_readwrite("ignition", &PedalState::ignition);

  py::class_<ControlCommand>(m, "ControlCommand")
      .def_readonly("engine_voltage", &ControlCommand::engine_voltage)
      .def_readonly("motor_voltage", &ControlCommand::motor_voltage)
      .def_property_readonly("no_fire", &ControlCommand::no_fire);

  py::class_<PedalController>(m, "PedalController")
      .def_static("shipped", &PedalController::shipped)
      .def_static(
          "from_text",
          [](const std::string& text) { return PedalController(parse_rule_base(text)); },
          "text"_a)
      .def_property_readonly("rule_count",
                             [](const PedalController& c) { return c.rules().rules().size(); })
      .def(
          "step",
          [](const PedalController& c, const PedalState& p, double accel_rate,
             double brake_rate, double feedback) {
            return c.step(p, PedalRates{accel_rate, brake_rate}, feedback);
          },
          "pedals"_a, "accel_rate"_a = 0.0, "brake_rate"_a = 0.0, "motor_feedback"_a = 0.0)
      .def("term_peak", &PedalController::term_peak, "output"_a, "term"_a);

  m.def("shipped_rule_text", [] { return std::string(shipped_rule_text()); });

  // Scenarios and traces.
  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def_readwrite("name", &ScenarioSpec::name)
      .def_readwrite("description", &ScenarioSpec::description)
      .def_readwrite("duration", &ScenarioSpec::duration)
      .def_readwrite("dt", &ScenarioSpec::dt)
      .def("__eq__", [](const ScenarioSpec& a, const ScenarioSpec& b) { return a == b; });

  py::class_<Trace>(m, "Trace")
      .def_readonly("scenario", &Trace::scenario)
      .def_readonly("dt", &Trace::dt)
      .def("__len__", [](const Trace& t) { return t.samples.size(); })
      .def("column", &column, "name"_a, "One trace signal as a float array.")
      .def("no_fire_count",
           [](const Trace& t) {
             std::size_t n = 0;
             for (const TraceSample& s : t.samples) n += s.no_fire ? 1 : 0;
             return n;
           })
      .def("to_csv", &format_csv);

  m.def("load_scenario", &load_scenario, "path"_a);
  m.def(
      "parse_scenario",
      [](const std::string& text) { return parse_scenario(text); }, "text"_a);
  m.def("dump_scenario", &dump_scenario, "spec"_a);
  m.def(
      "run", [](const ScenarioSpec& spec) { return run(spec); }, "spec"_a,
      py::call_guard<py::gil_scoped_release>());
  m.def("export_csv", &export_csv, "trace"_a, "path"_a);
  m.def("export_plot", &export_plot, "trace"_a, "path"_a);
}
