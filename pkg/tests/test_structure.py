import math

import numpy as np
import pytest

from core.errors import InvalidFrame
from core.lti.integrate import linear_input, step_rk4
from core.signals import parse_at2, resample, to_si
from core.structure import (
    StructureState,
    TwoDofFrame,
    frame_state_space,
    inertial_feedback,
    modal_frequencies,
    newmark_step,
)
from tests.helpers import serialize_at2, synthetic_record

UNIT_FRAME = TwoDofFrame(m1=1.0, m2=1.0, k1=1.0, k2=1.0)


def run_newmark(frame, base_accel, dt, state=None):
    state = state or StructureState.at_rest()
    history = [state]
    for a in base_accel[1:]:
        state = newmark_step(frame, state, a, dt)
        history.append(state)
    return history


def displacements(history):
    return np.array([[s.x1, s.x2] for s in history])


# ----------------------------
# Frame definition
# ----------------------------
@pytest.mark.parametrize(
    "kwargs",
    [
        dict(m1=0.0, m2=1.0, k1=1.0, k2=1.0),
        dict(m1=1.0, m2=1.0, k1=-1.0, k2=1.0),
        dict(m1=1.0, m2=1.0, k1=1.0, k2=1.0, c1=-0.1),
        dict(m1=1.0, m2=float("nan"), k1=1.0, k2=1.0),
    ],
)
def test_invalid_frames_rejected(kwargs):
    with pytest.raises(InvalidFrame):
        TwoDofFrame(**kwargs)


def test_matrices():
    frame = TwoDofFrame(m1=2.0, m2=3.0, k1=5.0, k2=7.0, c1=0.5, c2=0.25)
    assert frame.mass_matrix().tolist() == [[2.0, 0.0], [0.0, 3.0]]
    assert frame.stiffness_matrix().tolist() == [[12.0, -7.0], [-7.0, 7.0]]
    assert frame.damping_matrix().tolist() == [[0.75, -0.25], [-0.25, 0.25]]
    assert frame.total_mass == 5.0


def test_from_damping_ratios_hits_both_modes():
    frame = TwoDofFrame.from_damping_ratios(100.0, 100.0, 41300.0, 41300.0, 0.05, 0.05)
    assert frame.c1 > 0 and frame.c2 >= 0
    assert np.allclose(frame.modal_damping_ratios(), [0.05, 0.05], rtol=1e-9)


def test_from_damping_ratios_rejects_negative_dashpots():
    with pytest.raises(InvalidFrame):
        TwoDofFrame.from_damping_ratios(1.0, 1.0, 1.0, 1.0, 0.20, 0.01)


# ----------------------------
# Modal frequencies
# ----------------------------
def test_modal_frequencies_unit_frame():
    w1, w2 = modal_frequencies(UNIT_FRAME)
    assert w1 == pytest.approx(math.sqrt((3 - math.sqrt(5)) / 2), abs=1e-12)
    assert w2 == pytest.approx(math.sqrt((3 + math.sqrt(5)) / 2), abs=1e-12)
    assert w1 == pytest.approx(0.61803, abs=1e-5)
    assert w2 == pytest.approx(1.61803, abs=1e-5)


def test_modal_frequencies_agree_with_eigensolver():
    frame = TwoDofFrame(m1=100.0, m2=80.0, k1=41300.0, k2=30000.0)
    omegas, _ = frame.modes()
    assert np.allclose(modal_frequencies(frame), omegas, rtol=1e-12)


def test_stiffness_scaling_doubles_frequencies():
    stiff = TwoDofFrame(m1=1.0, m2=1.0, k1=4.0, k2=4.0)
    assert np.allclose(modal_frequencies(stiff), 2.0 * np.array(modal_frequencies(UNIT_FRAME)), rtol=1e-12)


def test_single_story_limit():
    frame = TwoDofFrame(m1=1.0, m2=1e-9, k1=1.0, k2=1e3)
    w1, w2 = modal_frequencies(frame)
    assert w1 == pytest.approx(1.0, rel=1e-3)
    assert w1 <= w2


# ----------------------------
# Newmark
# ----------------------------
def test_rest_stays_at_rest():
    state = newmark_step(UNIT_FRAME, StructureState.at_rest(), 0.0, 0.01)
    assert state == StructureState.at_rest()


def test_constant_base_acceleration_static_offset():
    frame = TwoDofFrame(m1=1.0, m2=1.0, k1=1.0, k2=1.0, c1=0.1, c2=0.1)
    dt = 0.05
    history = run_newmark(frame, np.ones(12001), dt)
    final = history[-1]
    assert final.x1 == pytest.approx(-2.0, abs=1e-3)
    assert final.x2 == pytest.approx(-3.0, abs=1e-3)
    # floors move with the table once the offset settles
    assert final.a1_abs == pytest.approx(1.0, abs=1e-3)
    assert final.a2_abs == pytest.approx(1.0, abs=1e-3)
    assert np.allclose(final.relative_acceleration, 0.0, atol=1e-3)


def test_undamped_energy_conserved():
    w1, _ = modal_frequencies(UNIT_FRAME)
    period = 2 * math.pi / w1
    dt = period / 200
    state = StructureState.initial(UNIT_FRAME, x=(0.01, 0.0))
    e0 = state.energy(UNIT_FRAME)
    worst = 0.0
    for _ in range(2000):
        state = newmark_step(UNIT_FRAME, state, 0.0, dt)
        worst = max(worst, abs(state.energy(UNIT_FRAME) - e0))
    assert worst < 1e-3 * e0


def test_damped_free_vibration_loses_energy_every_period():
    frame = TwoDofFrame(m1=1.0, m2=1.0, k1=1.0, k2=1.0, c1=0.05, c2=0.05)
    w1, _ = modal_frequencies(frame)
    dt = (2 * math.pi / w1) / 200
    state = StructureState.initial(frame, x=(0.01, 0.0))
    energies = [state.energy(frame)]
    for _ in range(8):
        for _ in range(200):
            state = newmark_step(frame, state, 0.0, dt)
        energies.append(state.energy(frame))
    assert all(b < a for a, b in zip(energies, energies[1:]))


def test_unconditionally_stable_for_large_steps():
    _, w2 = modal_frequencies(UNIT_FRAME)
    dt = 10 * (2 * math.pi / w2)
    state = StructureState.initial(UNIT_FRAME, x=(0.01, -0.01))
    e0 = state.energy(UNIT_FRAME)
    for _ in range(1000):
        state = newmark_step(UNIT_FRAME, state, 0.0, dt)
        assert state.is_finite()
    assert state.energy(UNIT_FRAME) <= e0 * (1 + 1e-9)


def test_response_is_linear_in_base_acceleration():
    frame = TwoDofFrame(m1=1.0, m2=2.0, k1=3.0, k2=1.5, c1=0.1, c2=0.05)
    ag = np.sin(np.linspace(0, 20, 801)) * np.exp(-np.linspace(0, 2, 801))
    single = displacements(run_newmark(frame, ag, 0.025))
    double = displacements(run_newmark(frame, 2.0 * ag, 0.025))
    assert np.allclose(double, 2.0 * single, rtol=1e-12, atol=1e-15)


def test_newmark_matches_rk4_on_ground_motion():
    motion = parse_at2(serialize_at2(synthetic_record(), 0.005))
    dt = 1e-4
    ag = resample(to_si(motion.accel), dt).values
    frame = TwoDofFrame.from_damping_ratios(100.0, 100.0, 41300.0, 41300.0, 0.05, 0.05)

    newmark = displacements(run_newmark(frame, ag, dt))

    ss = frame_state_space(frame)
    y = np.zeros(4)
    rk4 = [y[:2]]
    for k in range(len(ag) - 1):
        y = step_rk4(ss, y, linear_input(ag[k], ag[k + 1], k * dt, dt), dt, t=k * dt)
        rk4.append(y[:2])
    rk4 = np.array(rk4)

    assert len(ag) == 100001
    discrepancy = np.max(np.abs(newmark - rk4)) / np.max(np.abs(rk4))
    assert discrepancy < 1e-4


# ----------------------------
# Specimen reaction
# ----------------------------
def test_inertial_feedback_arithmetic():
    frame = TwoDofFrame(m1=2.0, m2=0.5, k1=1.0, k2=1.0)
    assert inertial_feedback(StructureState.at_rest(), frame) == 0.0
    assert inertial_feedback(StructureState(a1_abs=3.0, a2_abs=-4.0), frame) == pytest.approx(4.0)


def test_rigid_specimen_moves_with_table():
    frame = TwoDofFrame(m1=1.0, m2=1.0, k1=1e9, k2=1e9)
    dt = 1e-3
    ag = np.arange(1001) * dt
    final = run_newmark(frame, ag, dt)[-1]
    assert inertial_feedback(final, frame) == pytest.approx(frame.total_mass * ag[-1], rel=5e-3)


def test_initial_state_satisfies_equation_of_motion():
    frame = TwoDofFrame(m1=1.0, m2=2.0, k1=3.0, k2=4.0, c1=0.1, c2=0.2)
    state = StructureState.initial(frame, x=(0.1, -0.2), v=(0.3, 0.0), base_accel=0.5)
    residual = (
        frame.mass_matrix() @ state.relative_acceleration
        + frame.damping_matrix() @ state.velocity
        + frame.stiffness_matrix() @ state.displacement
        + frame.mass_matrix() @ np.ones(2) * 0.5
    )
    assert np.allclose(residual, 0.0, atol=1e-12)
    assert state.ag == 0.5

