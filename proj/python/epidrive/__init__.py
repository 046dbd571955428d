"""Hybrid epicyclic drivetrain simulator with a Mamdani pedal controller."""

from ._core import (
    ControlCommand,
    EpidriveError,
    GearTrainSpec,
    MixCoefficients,
    MotorParams,
    MotorState,
    PedalController,
    PedalState,
    ScenarioSpec,
    Trace,
    coefficients,
    dc_motor_defaults,
    derivatives,
    dump_scenario,
    engine_motor_defaults,
    export_csv,
    export_plot,
    idle_coupling,
    load_scenario,
    motor_speed_for,
    parse_scenario,
    run,
    shipped_rule_text,
    steady_state_speed,
    step,
    train_residual,
    validate_gear,
    wheel_speed,
)

__version__ = "0.1.0"
