import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from core.errors import (
    InputDataError,
    LengthMismatch,
    MalformedHeader,
    MalformedSample,
    NonFiniteSample,
    SampleCountMismatch,
    TooShort,
    UnitMismatch,
    ZeroReference,
)
from core.schema.series import STANDARD_GRAVITY, TimeSeries, Unit
from core.signals import differentiate, load_at2, nrmse, parse_at2, resample, to_si
from core.signals.processing import detrend, integrate
from tests.helpers import serialize_at2

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


# ----------------------------
# AT2
# ----------------------------
HEADER = "PEER NGA STRONG MOTION DATABASE RECORD\nTEST 1999\nACCELERATION TIME SERIES IN UNITS OF G\n"


def test_parse_at2_keyword_header():
    motion = parse_at2(HEADER + "NPTS=   4, DT=   .0050 SEC\n  .1 .2 .1 0\n")
    assert motion.accel.dt == 0.005
    assert motion.source_dt == 0.005
    assert motion.accel.unit is Unit.G
    assert list(motion.accel.values) == [0.1, 0.2, 0.1, 0.0]
    assert motion.npts == 4


def test_parse_at2_legacy_header():
    motion = parse_at2(HEADER + "    3    0.0100    NPTS, DT\n1.0 2.0\n3.0\n")
    assert motion.accel.dt == 0.01
    assert list(motion.accel.values) == [1.0, 2.0, 3.0]


def test_parse_at2_fortran_exponent():
    motion = parse_at2(HEADER + "NPTS= 2, DT= 0.01 SEC\n1.5D-02 -2.0E-03\n")
    assert np.allclose(motion.accel.values, [0.015, -0.002])


def test_parse_at2_count_mismatch():
    with pytest.raises(SampleCountMismatch):
        parse_at2(HEADER + "NPTS= 2, DT= 0.01 SEC\n0.1 0.2 0.3\n")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "only\nthree\nlines\n",
        HEADER + "no numbers here\n0.1\n",
        HEADER + "NPTS= 2.5, DT= 0.01 SEC\n0.1 0.2\n",
        HEADER + "NPTS= 2, DT= -0.01 SEC\n0.1 0.2\n",
    ],
)
def test_parse_at2_malformed_header(text):
    with pytest.raises(MalformedHeader):
        parse_at2(text)


def test_parse_at2_rejects_nonfinite_and_garbage():
    with pytest.raises(NonFiniteSample):
        parse_at2(HEADER + "NPTS= 2, DT= 0.01 SEC\n0.1 nan\n")
    with pytest.raises(MalformedSample):
        parse_at2(HEADER + "NPTS= 2, DT= 0.01 SEC\n0.1 abc\n")


@hsettings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=-2.0, max_value=2.0, allow_nan=False), min_size=1, max_size=40))
def test_at2_round_trip_preserves_samples(samples):
    motion = parse_at2(serialize_at2(samples, 0.01))
    assert list(motion.accel.values) == [float(s) for s in samples]


def test_load_at2_uses_file_stem(at2_file):
    motion = load_at2(at2_file)
    assert motion.record_id == "SYN001"
    assert motion.accel.dt == 0.005


def test_legacy_and_keyword_headers_agree():
    samples = [0.01, -0.02, 0.03]
    a = parse_at2(serialize_at2(samples, 0.02))
    b = parse_at2(serialize_at2(samples, 0.02, legacy_header=True))
    assert a.accel == b.accel


# ----------------------------
# NRMSE
# ----------------------------
def ts(values, dt=1.0, unit=Unit.M):
    return TimeSeries.create(values, dt, unit)


def test_nrmse_fixture_cases():
    assert nrmse(ts([1, 2, 3]), ts([1, 2, 3])) == 0.0
    assert abs(nrmse(ts([2, 0]), ts([0, 0])) - math.sqrt(2.0) / 2.0) < 1e-12
    assert abs(nrmse(ts([1, 1, 1, 1]), ts([0, 0, 0, 0])) - 1.0) < 1e-12


def test_nrmse_normalizes_by_reference_only():
    assert nrmse(ts([1.0, 1.0]), ts([3.0, 3.0])) == pytest.approx(2.0)


def test_nrmse_preconditions():
    with pytest.raises(LengthMismatch):
        nrmse(ts([1, 2]), ts([1, 2, 3]))
    with pytest.raises(LengthMismatch):
        nrmse(ts([1, 2], dt=0.1), ts([1, 2], dt=0.2))
    with pytest.raises(UnitMismatch):
        nrmse(ts([1, 2]), ts([1, 2], unit=Unit.M_S))
    with pytest.raises(ZeroReference):
        nrmse(ts([0, 0]), ts([1, 1]))


@hsettings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(finite, finite), min_size=1, max_size=30),
    st.floats(min_value=1e-3, max_value=1e3) | st.floats(min_value=-1e3, max_value=-1e-3),
)
def test_nrmse_scale_invariant(pairs, alpha):
    ref = np.array([p[0] for p in pairs])
    meas = np.array([p[1] for p in pairs])
    if np.max(np.abs(ref)) < 1e-6:
        return
    base = nrmse(ts(ref), ts(meas))
    scaled = nrmse(ts(alpha * ref), ts(alpha * meas))
    assert scaled == pytest.approx(base, rel=1e-9, abs=1e-12)
    assert nrmse(ts(ref), ts(ref)) == 0.0


# ----------------------------
# Resample / differentiate / integrate
# ----------------------------
def test_resample_midpoint_and_identity():
    out = resample(ts([0.0, 1.0]), 0.5)
    assert out.dt == 0.5
    assert list(out.values) == [0.0, 0.5, 1.0]
    same = ts([3.0, 1.0, 4.0], dt=0.1)
    assert resample(same, 0.1) == same


def test_resample_interior_value():
    out = resample(ts([0.0, 2.0, 0.0]), 0.25)
    assert len(out) == 9
    assert out.values[3] == pytest.approx(1.5)
    assert out.values[-1] == 0.0


def test_resample_keeps_unit():
    out = resample(ts([0.0, 1.0, 0.5], unit=Unit.G), 0.3)
    assert out.unit is Unit.G


@hsettings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.integers(min_value=2, max_value=50),
    st.sampled_from([0.5, 0.25, 0.1, 0.3, 0.07]),
)
def test_resample_exact_on_affine(a, b, n, dt_new):
    dt = 0.2
    src = ts(a + b * np.arange(n) * dt, dt=dt)
    out = resample(src, dt_new)
    expected = a + b * np.arange(len(out)) * dt_new
    assert np.allclose(out.values, expected, rtol=1e-9, atol=1e-9)
    assert resample(out, dt_new) == out


def test_differentiate_constant_ramp_sine():
    assert np.all(differentiate(ts([2.0] * 5)).values == 0.0)
    ramp = ts(np.arange(20) * 0.1, dt=0.1)
    assert np.allclose(differentiate(ramp).values, 1.0, atol=1e-12)
    dt = 0.001
    t = np.arange(0, 2 * np.pi, dt)
    rate = differentiate(ts(np.sin(t), dt=dt))
    assert np.max(np.abs(rate.values - np.cos(t))) < 1e-5


def test_differentiate_unit_and_length():
    assert differentiate(ts([0.0, 1.0, 4.0])).unit is Unit.M_S
    assert differentiate(ts([0.0, 1.0, 4.0], unit=Unit.G)).unit is Unit.G_S
    with pytest.raises(TooShort):
        differentiate(ts([0.0, 1.0]))


def test_to_si_uses_standard_gravity():
    out = to_si(ts([1.0, -0.5], unit=Unit.G))
    assert out.unit is Unit.M_S2
    assert list(out.values) == [STANDARD_GRAVITY, -0.5 * STANDARD_GRAVITY]
    si = ts([1.0], unit=Unit.M_S2)
    assert to_si(si) is si


def test_integrate_and_detrend():
    dt = 0.01
    accel = ts(np.ones(101), dt=dt, unit=Unit.M_S2)
    vel = integrate(accel)
    assert vel.unit is Unit.M_S
    assert vel.values[-1] == pytest.approx(1.0)
    disp = integrate(vel)
    assert disp.unit is Unit.M
    assert disp.values[-1] == pytest.approx(0.5, rel=1e-4)
    flat = detrend(ts(3.0 + 2.0 * np.arange(10)))
    assert np.allclose(flat.values, 0.0, atol=1e-12)
    with pytest.raises(UnitMismatch):
        integrate(ts([1.0, 2.0], unit=Unit.G))


def test_time_series_invariants():
    with pytest.raises(InputDataError):
        TimeSeries.create([1.0], 0.0)
    series = ts([1.0, 2.0, 3.0], dt=0.5)
    with pytest.raises(ValueError):
        series.values[0] = 5.0
    sub = series.slice(1)
    assert sub.unit is Unit.M and sub.dt == 0.5 and list(sub.values) == [2.0, 3.0]
