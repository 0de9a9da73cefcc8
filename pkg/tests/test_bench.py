"""Tests for the correctness-gated benchmark."""

import io
from unittest.mock import patch

import pytest

from sun_expm.bench import CSV_HEADER, BenchRow, bench_dimension, run_bench, write_bench_csv
from sun_expm.errors import InvalidInputError


def test_bench_dimension_rows():
    rows = bench_dimension(3, batch=4, repeats=1, seed=1)
    assert [row.method for row in rows] == ["expm_ch", "expm_oracle", "su_explicit"]
    for row in rows:
        assert row.n == 3
        assert row.batch == 4
        assert row.ns_per_matrix >= 0
        assert row.passed


def test_bench_large_dimension_has_no_explicit_row():
    rows = bench_dimension(12, batch=1, repeats=1, seed=2)
    assert [row.method for row in rows] == ["expm_ch", "expm_oracle"]


@pytest.mark.parametrize("kwargs", [{"n": 1, "batch": 1}, {"n": 13, "batch": 1}, {"n": 3, "batch": 0}])
def test_bench_dimension_rejects(kwargs):
    with pytest.raises(InvalidInputError):
        bench_dimension(**kwargs)


def test_bench_rejects_zero_repeats():
    with pytest.raises(InvalidInputError):
        bench_dimension(3, batch=1, repeats=0)


@patch("sun_expm.bench.time")
def test_bench_timing_uses_best_repeat(mock_time):
    # start/stop pairs: 1000 ns, then 400 ns, then 700 ns per method
    mock_time.perf_counter_ns.side_effect = [0, 1000, 0, 400, 0, 700] * 3
    rows = bench_dimension(2, batch=4, repeats=3, seed=3)
    assert [row.ns_per_matrix for row in rows] == [100.0, 100.0, 100.0]


def test_run_bench_seeds_each_dimension():
    rows = run_bench([2, 4], batch=1, repeats=1, seed=10)
    assert [row.n for row in rows] == [2, 2, 2, 4, 4, 4]
    again = run_bench([2, 4], batch=1, repeats=1, seed=10)
    assert [row.max_deviation for row in rows] == [row.max_deviation for row in again]


def test_write_bench_csv():
    stream = io.StringIO()
    write_bench_csv([BenchRow("expm_ch", 3, 10, 1234.5, 1e-15, 1e-9)], stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "expm_ch,3,10,1234.5,1e-15"


def test_bench_row_gate():
    assert not BenchRow("expm_ch", 3, 1, 1.0, 2e-9, 1e-9).passed
