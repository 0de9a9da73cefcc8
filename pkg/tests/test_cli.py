"""Tests for the command-line interface."""

import csv
import io
import json
import math
from unittest.mock import patch

import numpy as np
import pytest

from sun_expm.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, RunConfig, parse_config, run
from sun_expm.errors import InvalidInputError, NumericalFailureError
from sun_expm.utils.json_encoder import matrix_from_json

SIGMA_X = json.dumps({"n": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]})


def invoke(*argv):
    """Run the CLI and capture (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_expm_sigma_x():
    code, stdout, _ = invoke("expm", "--matrix", SIGMA_X, "--t", str(math.pi / 2), "--method", "ch")
    assert code == EXIT_OK
    document = json.loads(stdout)
    np.testing.assert_allclose(matrix_from_json(document["matrix"]), [[0, 1j], [1j, 0]], atol=1e-12)
    assert document["method"] == "ch"


@pytest.mark.parametrize("method", ["ch", "explicit", "oracle"])
def test_expm_zero_time_is_identity(method):
    code, stdout, _ = invoke("expm", "--matrix", SIGMA_X, "--t", "0", "--method", method, "--compare")
    assert code == EXIT_OK
    document = json.loads(stdout)
    np.testing.assert_allclose(matrix_from_json(document["matrix"]), np.eye(2), atol=1e-14)
    assert document["deviation"] == pytest.approx(0.0, abs=1e-14)


def test_expm_from_file(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(SIGMA_X, encoding="utf-8")
    code, stdout, _ = invoke("expm", "--input", str(path), "--t", "1.0", "--compare")
    assert code == EXIT_OK
    assert json.loads(stdout)["deviation"] < 1e-12


def test_expm_explicit_rejects_large_order():
    matrix = np.diag([1.0, 2.0, 3.0, -1.0, -2.0, -3.0])
    document = json.dumps({"n": 6, "re": matrix.tolist()})
    code, stdout, stderr = invoke("expm", "--matrix", document, "--method", "explicit")
    assert code == EXIT_INPUT
    assert stdout == ""
    assert "N in" in stderr


def test_expm_assert_tol_failure():
    with patch("sun_expm.cli.expm_oracle", return_value=np.zeros((2, 2))):
        code, stdout, _ = invoke("expm", "--matrix", SIGMA_X, "--assert-tol", "1e-9")
    assert code == EXIT_NUMERICAL
    assert json.loads(stdout)["deviation"] > 1e-9


def test_numerical_failure_exit_code():
    with patch("sun_expm.cli.expm_ch", side_effect=NumericalFailureError("stagnated", diagnostic=1.0)):
        code, _, stderr = invoke("expm", "--matrix", SIGMA_X)
    assert code == EXIT_NUMERICAL
    assert "stagnated" in stderr


@pytest.mark.parametrize(
    "argv",
    [
        ["expm", "--matrix", "{not json"],
        ["expm", "--matrix", json.dumps({"re": [[1, 2, 3]]})],
        ["expm", "--input", "/nonexistent/matrix.json"],
        ["expm"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_1(argv):
    code, _, stderr = invoke(*argv)
    assert code == EXIT_INPUT
    assert stderr


def test_invariants():
    document = json.dumps({"n": 3, "re": np.diag([1.0, 2.0, 3.0]).tolist()})
    code, stdout, _ = invoke("invariants", "--matrix", document)
    assert code == EXIT_OK
    result = json.loads(stdout)
    assert [pair[0] for pair in result["S"]] == pytest.approx([1, 6, 11, 6])
    assert [pair[0] for pair in result["I"]] == pytest.approx([1, 6, 22, 36])
    assert [pair[0] for pair in result["power_sums"]] == pytest.approx([6, 14, 36])


def test_roots_from_angles(tmp_path):
    geometry = tmp_path / "geometry.csv"
    code, stdout, _ = invoke(
        "roots", "--n", "3", "--angles", "0", "--r", str(math.sqrt(1.5)), "--emit-geometry", str(geometry)
    )
    assert code == EXIT_OK
    result = json.loads(stdout)
    assert result["spectrum"] == pytest.approx([-0.5, -0.5, 1.0])
    assert result["invariants"]["det"] == pytest.approx(0.25)

    with open(geometry, encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["kind", "index", "x1", "x2", "x3", "projection"]
    assert len(rows) == 5
    assert rows[-1][0] == "axis"
    assert rows[-1][-1] == ""


def test_roots_from_spectrum():
    code, stdout, _ = invoke("roots", "--n", "4", "--spectrum=-0.5,0.5,-0.5,0.5")
    assert code == EXIT_OK
    result = json.loads(stdout)
    assert result["angles"] == pytest.approx([math.pi / 2, math.pi / 4])
    assert result["power_sums"][0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize(
    "argv",
    [
        ["roots", "--n", "3", "--spectrum", "1,-1"],
        ["roots", "--n", "3", "--spectrum", "1,1,1"],
        ["roots", "--n", "6", "--angles", "0,0,0,0"],
        ["roots", "--n", "4", "--angles", "0.1"],
    ],
)
def test_roots_rejects(argv):
    assert invoke(*argv)[0] == EXIT_INPUT


def test_spin():
    code, stdout, _ = invoke("spin", "--j", "3/2", "--axis", "0.48,0.6,0.64", "--theta", "1.2")
    assert code == EXIT_OK
    result = json.loads(stdout)
    assert result["j"] == "3/2"
    assert result["character"]["deviation"] < 1e-9
    assert result["unitarity"] < 1e-10
    assert result["generator"]["n"] == 4


def test_spin_largest_spin_tilted_axis():
    code, stdout, _ = invoke("spin", "--j", "10", "--axis", "0.6,0,0.8")
    assert code == EXIT_OK
    result = json.loads(stdout)
    assert result["charpoly_deviation"] < 1e-9
    assert result["character"]["deviation"] <= result["character"]["gate"]


def test_spin_rejects_bad_j():
    assert invoke("spin", "--j", "1/3")[0] == EXIT_INPUT


def test_bench_csv():
    code, stdout, _ = invoke("bench", "--n", "2", "3", "--batch", "2", "--repeats", "1")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(stdout)))
    assert rows[0] == ["method", "n", "batch", "ns_per_matrix", "max_deviation"]
    assert len(rows) == 1 + 3 + 3


def test_bench_output_file(tmp_path):
    target = tmp_path / "bench.csv"
    code, stdout, _ = invoke("bench", "--n", "3", "--batch", "1", "--repeats", "1", "--output", str(target))
    assert code == EXIT_OK
    assert stdout == ""
    assert target.read_text(encoding="utf-8").startswith("method,n,batch")


def test_bench_rejects_dimension():
    assert invoke("bench", "--n", "13", "--batch", "1")[0] == EXIT_INPUT


def test_selftest_single_suite():
    code, stdout, _ = invoke("selftest", "--suite", "response", "--samples", "2")
    assert code == EXIT_OK
    assert "response" in stdout
    assert "spectra" not in stdout


def test_selftest_zero_samples():
    assert invoke("selftest", "--samples", "0")[0] == EXIT_INPUT


def test_selftest_failure_exit_code():
    with patch("sun_expm.cli.run_selftest") as mock_run:
        mock_run.return_value = []
        assert invoke("selftest")[0] == EXIT_OK
    failing = type("Result", (), {"passed": False, "name": "x", "error": "boom", "checks": []})()
    with patch("sun_expm.cli.run_selftest", return_value=[failing]):
        assert invoke("selftest")[0] == EXIT_NUMERICAL


def test_parse_config_seed_and_tolerances():
    cfg = parse_config(["--seed", "7", "expm", "--matrix", SIGMA_X, "--assert-tol", "1e-6"])
    assert cfg.seed == 7
    assert cfg.tolerances == {"assert_tol": 1e-6}
    assert cfg.output_format == "json"
    assert cfg.options["t"] == 1.0


def test_run_config_validation():
    with pytest.raises(InvalidInputError):
        RunConfig(subcommand="nope")
    with pytest.raises(InvalidInputError):
        RunConfig(subcommand="expm", input_path="a.json", inline="{}")
    with pytest.raises(InvalidInputError):
        RunConfig(subcommand="expm", tolerances={"assert_tol": 0.0})
    with pytest.raises(InvalidInputError):
        RunConfig(subcommand="expm").read_matrix()
