"""Correctness-gated timing of expm_ch against expm_oracle and su_explicit."""

import csv
import math
import time
from dataclasses import astuple, dataclass
from typing import Callable, Iterable, List, Sequence, TextIO

import numpy as np

from sun_expm.config import BENCH_REPEATS, ORACLE_RTOL, logger
from sun_expm.errors import InvalidInputError
from sun_expm.ops.expm_poly import expm_ch_batch, expm_oracle_batch, su_explicit_batch
from sun_expm.ops.matrix_core import max_norm
from sun_expm.ops.spectra import eig_hermitian
from sun_expm.ops.sun_generators import random_traceless_batch

BENCH_MIN_N = 2
BENCH_MAX_N = 12

CSV_HEADER = ["method", "n", "batch", "ns_per_matrix", "max_deviation"]


@dataclass(frozen=True)
class BenchRow:
    """One timed method at one dimension."""

    method: str
    n: int
    batch: int
    ns_per_matrix: float
    max_deviation: float
    gate: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.gate

    def csv_fields(self) -> list:
        return list(astuple(self))[:5]


def _best_time_ns(kernel: Callable[[], object], repeats: int) -> int:
    best = None
    for _ in range(repeats):
        start = time.perf_counter_ns()
        kernel()
        elapsed = time.perf_counter_ns() - start
        best = elapsed if best is None else min(best, elapsed)
    return int(best)


def _max_deviation(results: Sequence[np.ndarray], reference: Sequence[np.ndarray]) -> float:
    return max(max_norm(a - b) for a, b in zip(results, reference))


def bench_dimension(
    n: int,
    batch: int,
    repeats: int = BENCH_REPEATS,
    seed: int = 0,
    t: float = 1.0,
    rtol: float = ORACLE_RTOL,
) -> List[BenchRow]:
    """Time every applicable method on one seeded batch of SU(n) generators.

    Each method is timed best-of-repeats over the whole batch and reported
    per matrix. expm_ch and su_explicit are compared with the oracle; the
    oracle row reports its deviation from expm_ch. The gate is
    rtol * exp(|t| rho), rho the largest spectral radius in the batch.

    Raises:
        InvalidInputError: If n is outside 2..12, batch < 1 or repeats < 1
    """
    if not BENCH_MIN_N <= n <= BENCH_MAX_N:
        msg = f"Benchmark dimension must lie in {BENCH_MIN_N}..{BENCH_MAX_N}, got {n}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if batch < 1 or repeats < 1:
        msg = f"batch and repeats must be at least 1, got batch={batch}, repeats={repeats}"
        logger.error(msg)
        raise InvalidInputError(msg)

    generators = random_traceless_batch(n, batch, seed)
    matrices = [np.asarray(h.matrix) for h in generators]
    rho = max(float(np.max(np.abs(eig_hermitian(h).values))) for h in generators)
    gate = rtol * math.exp(abs(t) * rho)

    oracle = expm_oracle_batch(matrices, t)
    methods = [
        ("expm_ch", lambda: expm_ch_batch(matrices, t)),
        ("expm_oracle", lambda: expm_oracle_batch(matrices, t)),
    ]
    if n <= 5:
        methods.append(("su_explicit", lambda: su_explicit_batch(generators, t)))

    ch = expm_ch_batch(matrices, t)
    rows = []
    for name, kernel in methods:
        if name == "expm_ch":
            deviation = _max_deviation(ch, oracle)
        elif name == "expm_oracle":
            deviation = _max_deviation(oracle, ch)
        else:
            deviation = _max_deviation(kernel(), oracle)
        elapsed = _best_time_ns(kernel, repeats)
        row = BenchRow(
            method=name,
            n=n,
            batch=batch,
            ns_per_matrix=elapsed / batch,
            max_deviation=deviation,
            gate=gate,
        )
        if not row.passed:
            logger.warning(f"{name} at n={n} deviates by {deviation:.3e}, above the gate {gate:.3e}")
        rows.append(row)

    logger.info(f"Benchmarked n={n}, batch={batch}: " + ", ".join(f"{r.method} {r.ns_per_matrix:.0f} ns" for r in rows))
    return rows


def run_bench(
    dimensions: Iterable[int],
    batch: int,
    repeats: int = BENCH_REPEATS,
    seed: int = 0,
    t: float = 1.0,
) -> List[BenchRow]:
    """bench_dimension over several dimensions, each with its own seeded batch."""
    rows: List[BenchRow] = []
    for n in dimensions:
        rows.extend(bench_dimension(n, batch, repeats=repeats, seed=seed + n, t=t))
    return rows


def write_bench_csv(rows: Iterable[BenchRow], stream: TextIO) -> None:
    """Write rows as method,n,batch,ns_per_matrix,max_deviation."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
