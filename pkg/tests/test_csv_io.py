import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from core.errors import IoFailure, LengthMismatch, SchemaMismatch
from core.schema.record import COLUMNS, SimulationRecord
from core.signals import read_csv, write_csv
from core.signals.csv_io import read_columns, read_record, write_columns


def random_record(n, seed=0):
    rng = np.random.default_rng(seed)
    record = SimulationRecord.allocate(n)
    record.columns["t"][:] = np.arange(n) * 1e-4
    for name in COLUMNS[1:]:
        record.columns[name][:] = rng.normal(scale=10.0 ** rng.integers(-8, 8), size=n)
    return record


def test_record_round_trip_is_bitwise(tmp_path):
    record = random_record(500)
    path = write_csv(record, tmp_path / "run.csv")
    again = read_record(path)
    for name in COLUMNS:
        assert np.array_equal(again[name], record[name]), name
    assert path.read_text().splitlines()[0] == ",".join(COLUMNS)


def test_large_record(tmp_path):
    record = random_record(100_000, seed=3)
    columns = read_csv(write_csv(record, tmp_path / "big.csv"))
    assert len(columns["t"]) == 100_000
    assert np.array_equal(columns["a_table"], record["a_table"])


@hsettings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=50))
def test_any_finite_float_survives(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("csv") / "col.csv"
    write_columns({"t": np.arange(len(values)), "x": values}, path)
    assert read_columns(path)["x"].tolist() == [float(v) for v in values]


def test_missing_time_column(tmp_path):
    path = write_columns({"d_table": [1.0, 2.0]}, tmp_path / "no_t.csv")
    with pytest.raises(SchemaMismatch):
        read_csv(path)


def test_partial_schema_is_not_a_record(tmp_path):
    path = write_columns({"t": [0.0, 1.0], "d_table": [1.0, 2.0]}, tmp_path / "partial.csv")
    assert set(read_csv(path)) == {"t", "d_table"}
    with pytest.raises(SchemaMismatch):
        read_record(path)


def test_ragged_rows(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("t,x\n0,1\n1\n")
    with pytest.raises(SchemaMismatch):
        read_columns(path)


def test_write_rejects_unequal_columns(tmp_path):
    with pytest.raises(LengthMismatch):
        write_columns({"t": [0.0, 1.0], "x": [1.0]}, tmp_path / "bad.csv")


def test_read_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        read_csv(tmp_path / "absent.csv")


def test_record_invariants():
    with pytest.raises(LengthMismatch):
        SimulationRecord(columns={c: np.zeros(3 if c != "F" else 2) for c in COLUMNS})
    record = random_record(10)
    assert record.is_uniform()
    assert record.dt == pytest.approx(1e-4)
    assert record.series("v_table").unit.value == "m/s"
