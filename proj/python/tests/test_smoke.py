import os
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import epidrive

DATA = Path(os.environ.get("EPIDRIVE_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_coefficients_are_exact():
    c = epidrive.coefficients(epidrive.GearTrainSpec())
    assert c.engine == float(Fraction(39, 110))
    assert c.motor == float(Fraction(71, 110))
    assert c.engine + c.motor == 1.0


def test_wheel_speed_and_inverse():
    spec = epidrive.GearTrainSpec()
    assert epidrive.wheel_speed(spec, 110.0, 0.0) == pytest.approx(39.0, abs=1e-12)
    w5 = epidrive.motor_speed_for(spec, 0.0, 100.0)
    assert w5 == pytest.approx(float(Fraction(-3900, 71)), rel=1e-14)


def test_mesh_errors_map_to_python():
    with pytest.raises(epidrive.EpidriveError) as info:
        epidrive.validate_gear(epidrive.GearTrainSpec(40, 16, 71))
    assert info.value.category == "configuration error"
    assert info.value.exit_code == 3


def test_motor_steady_state():
    p = epidrive.engine_motor_defaults()
    s = epidrive.MotorState()
    for _ in range(10000):
        s = epidrive.step(p, s, 10.0, 1e-3)
    assert s.speed == pytest.approx((100 - 0.001) / 100.1, rel=1e-3)
    di, dw = epidrive.derivatives(p, epidrive.MotorState(1.0, 0.0), 0.0)
    assert di == pytest.approx(-2.0)
    assert dw == pytest.approx(1000.0)


def test_controller_idle_command():
    c = epidrive.PedalController.shipped()
    assert c.rule_count == 24
    cmd = c.step(epidrive.PedalState())
    assert not cmd.no_fire
    assert cmd.engine_voltage == pytest.approx(c.term_peak("engine_v", "idle"), abs=0.05)


def test_idle_scenario_balances(tmp_path):
    spec = epidrive.load_scenario(DATA / "scenarios" / "idle.yaml")
    trace = epidrive.run(spec)
    assert len(trace) == 8000
    w2 = trace.column("omega_engine")
    w5 = trace.column("omega_motor")
    arm = trace.column("omega_arm")
    assert isinstance(arm, np.ndarray)
    assert abs(arm[-1]) < 0.5
    assert w5[-1] / w2[-1] == pytest.approx(-0.549, abs=0.01)
    assert trace.no_fire_count() == 0

    csv = tmp_path / "idle.csv"
    svg = tmp_path / "idle.svg"
    epidrive.export_csv(trace, csv)
    epidrive.export_plot(trace, svg)
    assert csv.read_text() == trace.to_csv()
    assert svg.read_text().startswith("<?xml")


def test_scenario_round_trip_and_errors():
    spec = epidrive.load_scenario(DATA / "scenarios" / "reverse.yaml")
    assert epidrive.parse_scenario(epidrive.dump_scenario(spec)) == spec
    with pytest.raises(epidrive.EpidriveError) as info:
        epidrive.parse_scenario("name: x\nduration: 1\npedals:\n  accel: [[0, 2]]\n")
    assert info.value.category == "validation error"
