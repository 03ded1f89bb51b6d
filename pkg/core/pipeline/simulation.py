"""
Closed-loop scenario runner.

Per step: command c from r and r_dot, reference model step, table step under
the adaptive force, specimen step, tracking error and weight update, then one
logged row.
"""

import time
from typing import Optional

import numpy as np

from core.errors import NonFiniteState, ZeroReference
from core.logger import get_logger
from core.lti.integrate import linear_input, rk4_step
from core.mrac.controller import (
    AdaptiveState,
    build_augmented,
    build_regressor,
    command_signal,
    control_force,
    design_reference,
    lyapunov_value,
    reference_dc_gain,
    reference_step,
    true_weights,
    update_weights,
)
from core.pipeline.reference import build_reference
from core.plant.ideal import IdealTable, balance_acceleration, ideal_step
from core.plant.identified import IdentifiedTable, force_to_command, identified_step
from core.schema.record import SimulationRecord
from core.schemas import NrmseSummary, ScenarioConfig
from core.signals.csv_io import write_csv
from core.signals.processing import nrmse
from core.structure.frame import StructureState, inertial_feedback, newmark_step

logger = get_logger(__name__)


def simulate(config: ScenarioConfig) -> SimulationRecord:
    """Run one scenario and return the logged record."""
    started = time.perf_counter()
    dt = config.dt
    n = config.n_steps + 1

    frame = config.frame()
    m1 = frame.m1 if frame else 0.0
    m2 = frame.m2 if frame else 0.0

    aug = build_augmented(config.m_t_nominal, e_p=config.e_p, e_r=config.e_r, m1=m1, m2=m2)
    gc = design_reference(aug, config.reference_poles)
    dc_gain = reference_dc_gain(aug, gc)
    if abs(dc_gain - 1.0) > 1e-3:
        logger.info(f"[SIM] reference model passes constant references with gain {dc_gain:.4f}")
    K, P, B, B_r = gc.K, gc.P, aug.B, aug.B_r
    W_true = true_weights(m1, m2, config.m_t)
    lambda_true = 1.0 / config.m_t

    r, r_dot = build_reference(config)
    r_values = np.asarray(r.values)
    c_values = command_signal(r_values, np.asarray(r_dot.values), config.e_r)

    adaptive = AdaptiveState.create(config.gamma, config.initial_weights)
    structure = StructureState.at_rest() if frame else None
    sigma = np.zeros(2)
    X = np.zeros(3)
    X_r = np.zeros(3)

    identified = config.plant_kind == "identified"
    if identified:
        table = IdentifiedTable.create(
            dt,
            inner_gain=config.inner_gain,
            cutoff_hz=config.filter_cutoff_hz,
            output_scale=config.table_output_scale,
        )
        shaper = np.zeros(2)
    else:
        table = IdealTable(m_t=config.m_t)

    record = SimulationRecord.allocate(n)
    cols = record.columns
    cols["t"][:] = np.arange(n) * dt
    cols["r"][:] = r_values

    def log_row(k: int, F: float, e: np.ndarray, d_cmd: float) -> None:
        cols["dt_cmd"][k] = d_cmd
        cols["d_table"][k] = table.d_t
        cols["v_table"][k] = table.v_t
        cols["a_table"][k] = table.a_t
        if structure is not None:
            cols["d1"][k] = structure.x1
            cols["d2"][k] = structure.x2
            cols["a1_abs"][k] = structure.a1_abs
            cols["a2_abs"][k] = structure.a2_abs
        cols["F"][k] = F
        cols["V_lyap"][k] = lyapunov_value(e, P, adaptive.W_hat, W_true, lambda_true, adaptive.gamma)
        record.augmented_state[k] = X
        record.reference_state[k] = X_r
        record.reference_acceleration[k] = -float(K @ X_r)
        record.weights[k] = adaptive.W_hat
        record.error_norm[k] = float(np.sqrt(e @ e))

    F = control_force(adaptive, build_regressor(sigma, K, X))
    log_row(0, F, X - X_r, 0.0)

    Ep, Er = aug.Ep, aug.Er
    progress_every = max(1, (n - 1) // 10)

    for k in range(n - 1):
        t = k * dt
        c_of_t = linear_input(c_values[k], c_values[k + 1], t, dt)

        # (1) reference model
        X_r = reference_step(gc, B_r, X_r, c_values[k], dt, c_next=c_values[k + 1], t=t)

        # (2) table under the adaptive force; specimen reaction held over the step
        feedback = inertial_feedback(structure, frame) if frame else 0.0
        if identified:
            F = control_force(adaptive, build_regressor(sigma, K, X))
            d_cmd, shaper = force_to_command(F, config.m_t_nominal, shaper, dt, config.command_leak)
            disturbance = -config.csi_gain * feedback / config.m_t_nominal if config.csi_extension else 0.0
            previous = np.array([table.d_t, table.v_t])
            table = identified_step(table, d_cmd, dt, disturbance)
            current = np.array([table.d_t, table.v_t])

            def command_rate(tau: float, xc: np.ndarray) -> np.ndarray:
                frac = (tau - t) / dt
                dv = previous + frac * (current - previous)
                return np.array([Ep @ dv + Er * xc[0] - c_of_t(tau)])

            x_c = rk4_step(command_rate, t, X[2:], dt)
            X = np.array([table.d_t, table.v_t, x_c[0]])
            if frame:
                structure = newmark_step(frame, structure, table.a_t, dt)
        else:
            W_hat = adaptive.W_hat
            s1, s2 = sigma

            def force_law(tau: float, y: np.ndarray) -> float:
                return -(W_hat[0] * s1 + W_hat[1] * s2 - W_hat[2] * float(K @ y))

            def command_rate(tau: float, y: np.ndarray, accel: float) -> np.ndarray:
                return np.array([Ep[0] * y[0] + Ep[1] * y[1] + Er * y[2] - c_of_t(tau)])

            table, x_c = ideal_step(
                table, force_law, feedback, dt, t=t, companion=X[2:], companion_rate=command_rate
            )
            X = np.array([table.d_t, table.v_t, x_c[0]])
            d_cmd = X_r[0]

            # (3) table acceleration and specimen step consistent with the force balance
            F = control_force(adaptive, build_regressor(sigma, K, X))
            a_t, structure = balance_acceleration(F, table.m_t, frame, structure, dt)
            table = IdealTable(m_t=table.m_t, d_t=table.d_t, v_t=table.v_t, a_t=a_t)

        if frame:
            sigma = np.array([structure.a1_abs, structure.a2_abs])

        # (4) adaptation
        e = X - X_r
        if config.adapt:
            phi = build_regressor(sigma, K, X)
            adaptive = update_weights(adaptive, phi, e, P, B, dt)

        if not (np.all(np.isfinite(X)) and adaptive.is_finite() and table.is_finite()):
            raise NonFiniteState("simulation state diverged", t=t + dt)
        log_row(k + 1, F, e, d_cmd)

        if (k + 1) % progress_every == 0:
            logger.debug(
                f"[SIM] {100.0 * (k + 1) / (n - 1):5.1f}% t={t + dt:.3f}s |e|={record.error_norm[k + 1]:.3e} "
                f"W_hat={np.array2string(adaptive.W_hat, precision=4)}"
            )

    logger.info(
        f"[SIM] {config.plant_kind} plant, {n} samples in {time.perf_counter() - started:.2f}s; "
        f"final W_hat={np.array2string(adaptive.W_hat, precision=4)}"
    )
    return record


def summarize(record: SimulationRecord, window_s: float = 2.0) -> NrmseSummary:
    """
    NRMSE of the table response after `window_s`: displacement, velocity and
    acceleration against the reference-model trajectory, plus displacement
    against the commanded reference r.
    """
    t = record.columns["t"]
    start = int(np.searchsorted(t, window_s - 1e-9 * max(record.dt, 1.0), side="left"))
    start = min(start, len(record) - 1)
    scores = {}
    for quantity, column in (
        ("displacement", "d_table"),
        ("velocity", "v_table"),
        ("acceleration", "a_table"),
    ):
        reference = record.reference_series(quantity).slice(start)
        measured = record.series(column).slice(start)
        scores[quantity] = nrmse(reference, measured)
    scores["command"] = nrmse(record.series("r").slice(start), record.series("d_table").slice(start))
    return NrmseSummary(window_s=window_s, samples=len(record) - start, **scores)


def run_simulate(config: ScenarioConfig, output_path: Optional[str] = None) -> SimulationRecord:
    """Simulate, write the CSV and attach the NRMSE summary."""
    record = simulate(config)
    write_csv(record, output_path or config.output_path)
    try:
        record.summary = summarize(record, config.nrmse_window_s)
    except ZeroReference:
        logger.error("[SIM] reference trajectory is identically zero; NRMSE is undefined")
        raise
    logger.info(f"[SIM] {record.summary.as_text()}")
    return record
