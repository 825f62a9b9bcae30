"""Table formatting: fixed schemas, %.17g floats, byte-level determinism."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotframe.io_tables import (
    bloch_table,
    check_table,
    format_cell,
    phase_table,
    potential_table,
    write_table,
)


def test_format_cell_strings_pass_through():
    assert format_cell("state") == "state"


def test_format_cell_bools_before_ints():
    # bool is an int subclass; it must not render as "True"
    assert format_cell(True) == "1"
    assert format_cell(False) == "0"
    assert format_cell(np.bool_(True)) == "1"
    assert format_cell(7) == "7"
    assert format_cell(np.int64(-3)) == "-3"


def test_format_cell_float_rendering():
    assert format_cell(1.0) == "1"
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(np.float64(2.5)) == "2.5"


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_format_cell_floats_round_trip(value):
    assert float(format_cell(value)) == value


def test_write_table_layout(tmp_path):
    path = write_table(
        tmp_path / "t.csv", ["a", "b"], [(1, 2.5), ("x", True)]
    )
    assert path.read_text() == "a,b\n1,2.5\nx,1\n"


def test_write_table_rejects_ragged_rows(tmp_path):
    with pytest.raises(ValueError, match="row width"):
        write_table(tmp_path / "t.csv", ["a", "b"], [(1,)])


def test_write_table_byte_identical(tmp_path):
    rng = np.random.default_rng(7)
    rows = [tuple(r) for r in rng.standard_normal((40, 3))]
    a = write_table(tmp_path / "a.csv", ["u", "v", "w"], rows)
    b = write_table(tmp_path / "b.csv", ["u", "v", "w"], rows)
    assert a.read_bytes() == b.read_bytes()


def test_potential_table_single_channel_zero_fill():
    x = np.array([0.0, 1.0])
    q = np.array([0.5, 0.25])
    v = np.zeros((2, 1, 1))
    v[:, 0, 0] = [-2.0, -1.0]
    header, rows = potential_table(x, q, v)
    assert header == ["x", "q", "V11", "V12", "V22"]
    assert rows[0] == (0.0, 0.5, -2.0, 0.0, 0.0)


def test_bloch_table_is_time_major():
    t = np.array([0.0, 1.0])
    x = np.array([-1.0, 1.0])
    b = np.arange(12, dtype=float).reshape(2, 2, 3)
    header, rows = bloch_table(t, x, b)
    assert header == ["t", "x", "B1", "B2", "B3"]
    assert [r[:2] for r in rows] == [(0.0, -1.0), (0.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert rows[3][2:] == (9.0, 10.0, 11.0)


def test_phase_table_column_mapping():
    class Report:
        state = 1
        branch = -1
        total = 0.25
        dynamical = 0.125
        geometric = 0.125
        anandan = 0.5
        sigma3 = -0.75

    header, rows = phase_table([Report()])
    assert header == ["state", "branch", "total", "dynamical", "geometric", "aa", "sigma3"]
    assert rows[0] == (1, -1, 0.25, 0.125, 0.125, 0.5, -0.75)


def test_check_table_booleans_render_as_bits(tmp_path):
    class Result:
        name = "demo"
        value = 0.5
        tolerance = 1.0
        passed = True

    header, rows = check_table([Result()])
    path = write_table(tmp_path / "c.csv", header, rows)
    assert path.read_text() == "check_name,value,tolerance,pass\ndemo,0.5,1,1\n"
