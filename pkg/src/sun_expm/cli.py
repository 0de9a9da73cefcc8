"""Command-line interface: expm, invariants, roots, spin, bench and selftest.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure or a
failed correctness gate.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np

from sun_expm import __version__
from sun_expm.bench import run_bench, write_bench_csv
from sun_expm.config import BENCH_REPEATS, DEFAULT_SEED, ORACLE_RTOL, log_configuration, logger
from sun_expm.errors import DegenerateSpectrumError, InvalidInputError, NumericalFailureError
from sun_expm.ops.expm_poly import expm_ch, expm_oracle, su_explicit, su_membership
from sun_expm.ops.invariants import invariants_of
from sun_expm.ops.matrix_core import HermitianTraceless, as_complex_matrix, max_norm
from sun_expm.ops.simplex_geometry import (
    AngleParams,
    EigenvalueVector,
    angles_to_spectrum,
    geometry_header,
    geometry_rows,
    invariants_from_angles,
    simplex_vertices,
    spectrum_to_angles,
)
from sun_expm.ops.sun_generators import character, spin_charpoly_check, spin_generator
from sun_expm.selftest import SUITES, format_table, run_selftest
from sun_expm.utils.json_encoder import dumps_result, matrix_from_json, matrix_to_json

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

SUBCOMMANDS = ("expm", "invariants", "roots", "spin", "bench", "selftest")


class UsageError(Exception):
    """argparse rejected the command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    """Parsed command line for one invocation.

    Attributes:
        subcommand: One of SUBCOMMANDS
        input_path: Path of a matrix JSON file ("-" for stdin)
        inline: Matrix JSON given on the command line
        output_format: "json" or "csv"
        seed: PRNG seed
        tolerances: Optional overrides, e.g. {"assert_tol": 1e-9}
        options: Remaining subcommand flags
    """

    subcommand: str
    input_path: Optional[str] = None
    inline: Optional[str] = None
    output_format: str = "json"
    seed: int = DEFAULT_SEED
    tolerances: Dict[str, float] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            msg = f"Unknown subcommand '{self.subcommand}'"
            logger.error(msg)
            raise InvalidInputError(msg)

        if self.input_path is not None and self.inline is not None:
            msg = "Give either --input or --matrix, not both"
            logger.error(msg)
            raise InvalidInputError(msg)

        for name, value in self.tolerances.items():
            if not value > 0:
                msg = f"Tolerance {name} must be positive, got {value}"
                logger.error(msg)
                raise InvalidInputError(msg)

    def read_matrix(self) -> np.ndarray:
        """Load the matrix from --input or --matrix."""
        if self.inline is not None:
            text = self.inline
        elif self.input_path == "-":
            text = sys.stdin.read()
        elif self.input_path is not None:
            text = Path(self.input_path).read_text(encoding="utf-8")
        else:
            msg = "A matrix is required: pass --input PATH or --matrix JSON"
            logger.error(msg)
            raise InvalidInputError(msg)
        return as_complex_matrix(matrix_from_json(json.loads(text)))


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _add_matrix_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", dest="input_path", metavar="PATH", help="matrix JSON file, '-' for stdin")
    source.add_argument("--matrix", dest="inline", metavar="JSON", help='inline matrix JSON {"n", "re", "im"}')


def build_parser() -> argparse.ArgumentParser:
    """Build the argparse tree for every subcommand."""
    parser = _Parser(prog="sun-expm", description="Matrix exponentials via the Cayley-Hamilton polynomial.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed (default: $SUN_EXPM_SEED)")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    expm = sub.add_parser("expm", help="exponentiate a matrix")
    _add_matrix_source(expm)
    expm.add_argument("--t", type=float, default=1.0)
    expm.add_argument("--method", choices=("ch", "explicit", "oracle"), default="ch")
    expm.add_argument("--compare", action="store_true", help="report max-norm deviation from the oracle")
    expm.add_argument("--assert-tol", type=float, default=None, help="exit 2 if the deviation exceeds this")

    invariants = sub.add_parser("invariants", help="symmetric invariants S, I and power sums")
    _add_matrix_source(invariants)

    roots = sub.add_parser("roots", help="angles <-> spectrum for N = 3, 4, 5")
    roots.add_argument("--n", type=int, choices=(3, 4, 5), required=True)
    given = roots.add_mutually_exclusive_group(required=True)
    given.add_argument("--angles", type=_float_list)
    given.add_argument("--spectrum", type=_float_list)
    roots.add_argument("--r", type=float, default=1.0, help="radius used with --angles")
    roots.add_argument("--emit-geometry", metavar="CSV", default=None)

    spin = sub.add_parser("spin", help="spin-j generator, exponential and character check")
    spin.add_argument("--j", required=True, help='half-integer, e.g. 1 or "3/2"')
    spin.add_argument("--axis", type=_float_list, default=[0.0, 0.0, 1.0])
    spin.add_argument("--theta", type=float, default=1.0)

    bench = sub.add_parser("bench", help="time expm_ch against the oracle")
    bench.add_argument("--n", type=int, nargs="+", default=[3])
    bench.add_argument("--batch", type=int, default=100)
    bench.add_argument("--repeats", type=int, default=BENCH_REPEATS)
    bench.add_argument("--t", type=float, default=1.0)
    bench.add_argument("--output", metavar="CSV", default=None, help="write CSV here instead of stdout")

    selftest = sub.add_parser("selftest", help="run the property suites")
    selftest.add_argument("--suite", action="append", choices=sorted(SUITES), default=None)
    selftest.add_argument("--samples", type=int, default=20)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse argv into a RunConfig.

    Raises:
        UsageError: On argparse errors
        InvalidInputError: On inconsistent options
    """
    args = vars(build_parser().parse_args(argv))
    subcommand = args.pop("subcommand")
    seed = args.pop("seed")
    input_path = args.pop("input_path", None)
    inline = args.pop("inline", None)
    tolerances = {}
    if args.get("assert_tol") is not None:
        tolerances["assert_tol"] = args.pop("assert_tol")
    output_format = "csv" if subcommand == "bench" else "json"
    return RunConfig(
        subcommand=subcommand,
        input_path=input_path,
        inline=inline,
        output_format=output_format,
        seed=seed,
        tolerances=tolerances,
        options=args,
    )


def cmd_expm(cfg: RunConfig, out: TextIO) -> int:
    """Exponentiate the input matrix and optionally compare with the oracle."""
    matrix = cfg.read_matrix()
    t = cfg.options["t"]
    method = cfg.options["method"]

    if method == "explicit":
        result = su_explicit(HermitianTraceless(matrix), t)
    elif method == "oracle":
        result = expm_oracle(matrix, t)
    else:
        result = expm_ch(matrix, t)

    document: Dict[str, Any] = {"method": method, "t": t, "matrix": matrix_to_json(result)}
    status = EXIT_OK
    if cfg.options.get("compare") or "assert_tol" in cfg.tolerances:
        deviation = max_norm(result - expm_oracle(matrix, t))
        document["deviation"] = deviation
        limit = cfg.tolerances.get("assert_tol")
        if limit is not None and deviation > limit:
            logger.error(f"expm deviation {deviation:.3e} exceeds --assert-tol {limit:.3e}")
            status = EXIT_NUMERICAL
    logger.info(f"expm n={matrix.shape[0]} t={t} method={method}")
    out.write(dumps_result(document) + "\n")
    return status


def cmd_invariants(cfg: RunConfig, out: TextIO) -> int:
    """Emit {"S", "I", "power_sums"} for the input matrix."""
    matrix = cfg.read_matrix()
    invariants = invariants_of(matrix)
    document = {
        "S": invariants.s,
        "I": invariants.traces_invariants,
        "power_sums": invariants.power_sums,
    }
    out.write(dumps_result(document) + "\n")
    return EXIT_OK


def _write_geometry(path: str, n: int, spectrum: np.ndarray) -> None:
    r = float(np.linalg.norm(spectrum))
    if r == 0.0:
        msg = "Cannot draw the simplex of the zero spectrum"
        logger.error(msg)
        raise InvalidInputError(msg)
    vs = simplex_vertices(n, r)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(geometry_header(n))
        for row in geometry_rows(vs, spectrum / r):
            writer.writerow(["" if value is None else value for value in row])
    logger.info(f"Wrote simplex geometry for n={n} to {path}")


def cmd_roots(cfg: RunConfig, out: TextIO) -> int:
    """Convert between angle parameters and a traceless real spectrum."""
    n = cfg.options["n"]
    if cfg.options.get("angles") is not None:
        params = AngleParams(n=n, r=cfg.options["r"], angles=tuple(cfg.options["angles"]))
        spectrum = angles_to_spectrum(params).components
    else:
        values = cfg.options["spectrum"]
        if len(values) != n:
            msg = f"--spectrum needs {n} values, got {len(values)}"
            logger.error(msg)
            raise InvalidInputError(msg)
        ev = EigenvalueVector(np.array(values))
        params = spectrum_to_angles(ev)
        spectrum = ev.components

    closed = invariants_from_angles(params)
    document = {
        "n": n,
        "r": params.r,
        "angles": list(params.angles),
        "gimbal": params.gimbal,
        "spectrum": spectrum,
        "invariants": {
            "tr_h2": closed.tr_h2,
            "tr_h3": closed.tr_h3,
            "tr_h4": closed.tr_h4,
            "det": closed.det,
        },
        "power_sums": [float(np.sum(spectrum**p)) for p in range(1, n + 1)],
    }
    if cfg.options.get("emit_geometry"):
        _write_geometry(cfg.options["emit_geometry"], n, spectrum)
    out.write(dumps_result(document) + "\n")
    return EXIT_OK


def cmd_spin(cfg: RunConfig, out: TextIO) -> int:
    """Spin-j generator n.J, exp(i theta n.J), and the character check."""
    generator = spin_generator(cfg.options["j"], cfg.options["axis"])
    theta = cfg.options["theta"]
    matrix = np.asarray(generator.matrix.matrix)
    u = expm_ch(matrix, theta)
    trace = complex(np.trace(u))
    expected = character(generator.j, 1j * theta)
    unitarity, det_error = su_membership(u)
    charpoly = spin_charpoly_check(generator.j, generator.axis)
    # rho(n.J) = j, the same growth allowance the benchmark gate uses
    gate = ORACLE_RTOL * math.exp(abs(theta) * float(generator.j))
    document = {
        "j": str(generator.j),
        "axis": list(generator.axis),
        "theta": theta,
        "generator": matrix_to_json(matrix),
        "exponential": matrix_to_json(u),
        "character": {
            "trace": trace,
            "expected": expected,
            "deviation": abs(trace - expected),
            "gate": gate,
        },
        "unitarity": unitarity,
        "det_deviation": det_error,
        "charpoly_deviation": charpoly.max_deviation,
    }
    out.write(dumps_result(document) + "\n")
    return EXIT_OK if abs(trace - expected) <= gate and charpoly.passed else EXIT_NUMERICAL


def cmd_bench(cfg: RunConfig, out: TextIO) -> int:
    """Emit benchmark CSV; exit 2 if any method fails its correctness gate."""
    rows = run_bench(
        cfg.options["n"],
        cfg.options["batch"],
        repeats=cfg.options["repeats"],
        seed=cfg.seed,
        t=cfg.options["t"],
    )
    if cfg.options.get("output"):
        with open(cfg.options["output"], "w", encoding="utf-8", newline="") as handle:
            write_bench_csv(rows, handle)
    else:
        write_bench_csv(rows, out)
    return EXIT_OK if all(row.passed for row in rows) else EXIT_NUMERICAL


def cmd_selftest(cfg: RunConfig, out: TextIO) -> int:
    """Run the property suites and print a pass/fail table."""
    results = run_selftest(cfg.options.get("suite"), samples=cfg.options["samples"], seed=cfg.seed)
    out.write(format_table(results) + "\n")
    return EXIT_OK if all(result.passed for result in results) else EXIT_NUMERICAL


COMMANDS = {
    "expm": cmd_expm,
    "invariants": cmd_invariants,
    "roots": cmd_roots,
    "spin": cmd_spin,
    "bench": cmd_bench,
    "selftest": cmd_selftest,
}


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Parse argv, dispatch the subcommand and map failures to exit codes."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = parse_config(argv)
        log_configuration()
        return COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as e:
        err.write(f"sun-expm: error: {e}\n")
        return EXIT_INPUT
    except (InvalidInputError, DegenerateSpectrumError, json.JSONDecodeError, OSError) as e:
        logger.error(f"Input error: {e}")
        err.write(f"sun-expm: {e}\n")
        return EXIT_INPUT
    except NumericalFailureError as e:
        logger.error(f"Numerical failure: {e}")
        err.write(f"sun-expm: numerical failure: {e}\n")
        return EXIT_NUMERICAL
