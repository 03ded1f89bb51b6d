import math

import numpy as np
import pytest

from core.errors import InvalidMass, StepTooLarge
from core.plant import (
    IdealTable,
    IdentifiedTable,
    balance_acceleration,
    force_to_command,
    identified_step,
    ideal_step,
    inner_loop_poles,
)
from core.plant.identified import DEFAULT_LEAK
from core.structure import StructureState, TwoDofFrame, inertial_feedback


# ----------------------------
# Ideal table
# ----------------------------
def test_ideal_table_rejects_bad_mass():
    with pytest.raises(InvalidMass):
        IdealTable(m_t=0.0)


def test_ideal_step_newton():
    dt = 0.01
    table = ideal_step(IdealTable(m_t=2.0), 1.0, 0.0, dt)
    assert table.a_t == 0.5
    assert table.v_t == pytest.approx(0.5 * dt, abs=1e-15)
    assert table.d_t == pytest.approx(0.25 * dt * dt, abs=1e-15)


def test_ideal_step_uniform_motion():
    table = IdealTable(m_t=1.0, d_t=0.1, v_t=0.3)
    for _ in range(10):
        table = ideal_step(table, 0.0, 0.0, 0.01)
    assert table.d_t == pytest.approx(0.1 + 0.3 * 0.1, abs=1e-14)
    assert table.v_t == 0.3
    assert table.a_t == 0.0


def test_ideal_step_specimen_feedback_opposes_force():
    table = ideal_step(IdealTable(m_t=1.0), 3.0, 1.0, 0.01)
    assert table.a_t == pytest.approx(2.0)


def test_ideal_step_force_law_and_companion():
    # spring law F = -d with a companion integrating the displacement
    def law(tau, y):
        return -y[0]

    def companion_rate(tau, y, accel):
        return np.array([y[0]])

    table, extra = ideal_step(
        IdealTable(m_t=1.0, d_t=1.0), law, 0.0, 0.01, companion=np.zeros(1), companion_rate=companion_rate
    )
    assert table.d_t == pytest.approx(math.cos(0.01), abs=1e-10)
    assert table.v_t == pytest.approx(-math.sin(0.01), abs=1e-10)
    assert extra[0] == pytest.approx(math.sin(0.01), abs=1e-10)
    assert table.a_t == pytest.approx(-table.d_t)


def test_balance_bare_table():
    a_t, structure = balance_acceleration(6.0, 3.0, None, None, 0.01)
    assert a_t == 2.0
    assert structure is None


def test_balance_satisfies_equilibrium():
    frame = TwoDofFrame.from_damping_ratios(100.0, 100.0, 41300.0, 41300.0, 0.05, 0.05)
    m_t = 50.0
    structure = StructureState.at_rest()
    dt = 1e-3
    for k in range(500):
        F = 1000.0 * math.sin(2 * math.pi * 2.0 * k * dt)
        a_t, structure = balance_acceleration(F, m_t, frame, structure, dt)
        assert abs(F - (m_t * a_t + inertial_feedback(structure, frame))) <= 1e-8 * 1000.0
        assert structure.ag == a_t


def test_rigid_specimen_adds_its_mass():
    frame = TwoDofFrame(m1=2.0, m2=2.0, k1=1e9, k2=1e9)
    m_t, dt = 1.0, 1e-3
    structure = StructureState.at_rest()
    F = 0.0
    for k in range(1, 1001):
        F = 10.0 * k * dt
        a_t, structure = balance_acceleration(F, m_t, frame, structure, dt)
    assert a_t == pytest.approx(F / (m_t + frame.total_mass), rel=5e-3)


# ----------------------------
# Force to command
# ----------------------------
def test_zero_force_gives_zero_command():
    state = np.zeros(2)
    for _ in range(100):
        d_cmd, state = force_to_command(0.0, 1.0, state, 1e-3)
        assert d_cmd == 0.0


def test_constant_force_command_stays_bounded():
    F, m = 2.0, 4.0
    state = np.zeros(2)
    trace = []
    for _ in range(4000):
        d_cmd, state = force_to_command(F, m, state, 0.1)
        trace.append(d_cmd)
    limit = F / (m * DEFAULT_LEAK**2)
    assert trace[-1] == pytest.approx(limit, rel=1e-2)
    assert max(trace) <= limit * (1 + 1e-9)


def test_sine_force_command_amplitude():
    m, w, dt = 2.0, 2 * math.pi, 1e-3
    state = np.zeros(2)
    trace = []
    for k in range(6000):
        d_cmd, state = force_to_command(math.cos(w * k * dt), m, state, dt)
        trace.append(d_cmd)
    # the leak poles decay over tens of seconds; a quadratic absorbs what is left of them
    t = np.arange(4000, 6000) * dt
    basis = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t), t, t**2])
    coef, *_ = np.linalg.lstsq(basis, np.array(trace[4000:]), rcond=None)
    amplitude = math.hypot(coef[0], coef[1])
    assert amplitude == pytest.approx(1.0 / (m * (w * w + DEFAULT_LEAK**2)), rel=1e-3)
    # displacement lags the force by half a turn
    assert coef[0] < 0


# ----------------------------
# Identified table
# ----------------------------
def test_identified_table_rejects_large_step():
    with pytest.raises(StepTooLarge):
        IdentifiedTable.create(1e-3)
    table = IdentifiedTable.create(1e-4)
    with pytest.raises(StepTooLarge):
        identified_step(table, 0.0, 2e-4)


def test_identified_zero_command():
    table = IdentifiedTable.create(1e-4)
    for _ in range(200):
        table = identified_step(table, 0.0, 1e-4)
    assert table.d_t == 0.0 and table.v_t == 0.0 and table.a_t == 0.0
    assert np.all(table.x == 0.0)


def test_identified_step_command_settles():
    dt = 1e-4
    table = IdentifiedTable.create(dt)
    for _ in range(10000):
        table = identified_step(table, 0.01, dt)
    assert table.is_finite()
    assert table.d_t == pytest.approx(0.01, rel=0.02)


def test_identified_acceleration_matches_differentiated_displacement():
    dt = 1e-4
    table = IdentifiedTable.create(dt)
    n = 30000
    d, a = np.empty(n), np.empty(n)
    for k in range(n):
        table = identified_step(table, 0.01 * math.sin(2 * math.pi * k * dt), dt)
        d[k], a[k] = table.d_t, table.a_t
    dd = np.gradient(np.gradient(d, dt), dt)
    tail = slice(n - 10000, n - 10)
    rms_err = np.sqrt(np.mean((a[tail] - dd[tail]) ** 2))
    assert rms_err / np.sqrt(np.mean(a[tail] ** 2)) < 0.02


def test_inner_loop_is_stable():
    poles = inner_loop_poles()
    assert poles.size > 0
    assert np.all(poles.real < 0)
