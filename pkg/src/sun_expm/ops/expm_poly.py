"""exp(itM) as the order-(N-1) matrix polynomial sum_n M^n E_n(t).

Also holds the resolvent polynomial, the unit-matrix term written with
trace invariants, the explicit SU(2..5) brackets and an independent
scaling-and-squaring oracle.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from sun_expm.config import logger
from sun_expm.errors import InvalidInputError, PoleProximityError, UnsupportedOrderError
from sun_expm.ops.invariants import SymmetricInvariants, invariants_of, sym_from_spectrum
from sun_expm.ops.matrix_core import (
    ComplexMatrix,
    HermitianTraceless,
    as_complex_matrix,
    determinant,
    max_norm,
    power_ladder,
    trace_powers,
)
from sun_expm.ops.response import ResponseDerivs, response_derivs
from sun_expm.ops.spectra import Spectrum, eig_hermitian, spectrum_of

EXPLICIT_ORDERS = (2, 3, 4, 5)

# relative size of the last Taylor term kept by the oracle
TAYLOR_TERM_RTOL = 1e-20
TAYLOR_MAX_TERMS = 60

# |det(I - sM)| below this fraction of its term-wise magnitude counts as a pole
POLE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class ExpPolyCoeffs:
    """Coefficients E_0..E_{N-1} of exp(itM) = sum_n M^n E_n(t)."""

    t: float
    e: npt.NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class ResolventCoeffs:
    """Coefficients R_0..R_{N-1} of (I - sM)^-1 = sum_n M^n R_n(s)."""

    s: complex
    r: npt.NDArray[np.complex128]


@dataclass(frozen=True)
class HierarchyReport:
    """Result of comparing the rank-N expansion with the rank-(N-1) one.

    Attributes:
        n: Rank N of the generator
        coefficient_deviation: Max |E_n(rank N) - c_{n-1}(rank N-1 on F_N)| for n >= 1
        unit_term_deviation: |explicit unit term - trace-invariant unit term|
        tol: Acceptance threshold
    """

    n: int
    coefficient_deviation: float
    unit_term_deviation: float
    tol: float = 1e-12

    @property
    def max_deviation(self) -> float:
        return max(self.coefficient_deviation, self.unit_term_deviation)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def exp_coeffs(invariants: SymmetricInvariants, rd: ResponseDerivs) -> ExpPolyCoeffs:
    """E_n(t) = sum_{m=0}^{N-1-n} (-1)^m S_m (-i d/dt)^{N-1-n-m} F(t).

    Args:
        invariants: S_0..S_N of the generator
        rd: Response derivatives with at least N entries

    Returns:
        ExpPolyCoeffs: E_0..E_{N-1}

    Raises:
        InvalidInputError: On length mismatch
    """
    n = invariants.n
    if invariants.s.size != n + 1:
        msg = f"Expected {n + 1} symmetric invariants, got {invariants.s.size}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if rd.derivs.size < n:
        msg = f"Need at least {n} response derivatives for n={n}, got {rd.derivs.size}"
        logger.error(msg)
        raise InvalidInputError(msg)

    e = np.zeros(n, dtype=np.complex128)
    for k in range(n):
        for m in range(n - k):
            sign = -1.0 if m % 2 else 1.0
            e[k] += sign * invariants.s[m] * rd.derivs[n - 1 - k - m]
    return ExpPolyCoeffs(t=rd.t, e=e)


def _assemble(ladder: List[ComplexMatrix], coeffs: Sequence[complex]) -> ComplexMatrix:
    result = np.zeros_like(ladder[0])
    for power, c in zip(ladder, coeffs):
        result += c * power
    return result


def expm_ch(
    matrix: Any,
    t: float,
    spectrum: Optional[Spectrum] = None,
    method: str = "auto",
) -> ComplexMatrix:
    """exp(itM) by the Cayley-Hamilton polynomial.

    Pipeline: spectrum, symmetric invariants, response derivatives,
    E_n coefficients, then the sum over the power ladder I, M, ..., M^(N-1).

    Args:
        matrix: Square complex matrix
        t: Time parameter
        spectrum: Precomputed spectrum of the matrix, if available
        method: Response path, passed to response_derivs

    Returns:
        ComplexMatrix: exp(itM)

    Raises:
        NumericalFailureError: If the spectrum cannot be computed
    """
    matrix = as_complex_matrix(matrix)
    n = matrix.shape[0]
    spec = spectrum if spectrum is not None else spectrum_of(matrix)
    invariants = sym_from_spectrum(spec)
    rd = response_derivs(spec, t, n - 1, method=method)
    coeffs = exp_coeffs(invariants, rd)
    return _assemble(power_ladder(matrix, n - 1), coeffs.e)


def expm_oracle(matrix: Any, t: float) -> ComplexMatrix:
    """exp(itM) by scaling and squaring of the Taylor series.

    The argument is scaled by 2^-k until its 1-norm is at most 1/2, the
    Taylor series is summed until a term falls below 1e-20 of the sum, and
    the result is squared k times. Independent of every spectral routine.
    """
    matrix = as_complex_matrix(matrix)
    n = matrix.shape[0]
    a = 1j * t * matrix
    norm = float(np.max(np.sum(np.abs(a), axis=0)))
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0 else 0
    a = a / (2.0**squarings)

    total = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, TAYLOR_MAX_TERMS + 1):
        term = term @ a / k
        total = total + term
        if max_norm(term) < TAYLOR_TERM_RTOL * max_norm(total):
            break

    for _ in range(squarings):
        total = total @ total
    return total


def resolvent_poly(matrix: Any, s: complex) -> Tuple[ComplexMatrix, ResolventCoeffs]:
    """(I - sM)^-1 as sum_n M^n R_n(s).

    R_n(s) = s^n Trunc_{N-1-n}[det(I - sM)] / det(I - sM), with
    det(I - sM) = sum_m (-s)^m S_m and Trunc_k keeping powers s^0..s^k.

    Args:
        matrix: Square complex matrix
        s: Complex scalar away from the reciprocal eigenvalues

    Returns:
        Tuple[ComplexMatrix, ResolventCoeffs]: Assembled matrix and coefficients

    Raises:
        PoleProximityError: If det(I - sM) is numerically zero
    """
    matrix = as_complex_matrix(matrix)
    n = matrix.shape[0]
    s = complex(s)
    invariants = invariants_of(matrix)

    terms = np.array([(-s) ** m * invariants.s[m] for m in range(n + 1)], dtype=np.complex128)
    denominator = complex(np.sum(terms))
    scale = float(np.sum(np.abs(terms)))
    if abs(denominator) <= POLE_RTOL * scale:
        msg = f"det(I - sM) = {abs(denominator):.3e} vanishes at s={s}; s is at a pole of the resolvent"
        logger.error(msg)
        raise PoleProximityError(msg, diagnostic=abs(denominator) / scale)

    partial = np.cumsum(terms)
    r = np.array([s**k * partial[n - 1 - k] / denominator for k in range(n)], dtype=np.complex128)
    result = _assemble(power_ladder(matrix, n - 1), r)
    return result, ResolventCoeffs(s=s, r=r)


def unit_term(invariants: SymmetricInvariants, rd: ResponseDerivs) -> complex:
    """Scalar multiplying I in exp(itH), written with the trace invariants I_n.

    (-1)^(N-1) sum_n (1/n!) I_n (i d/dt)^(N-1-n) F(t), where
    (i d/dt)^p F = (-1)^p (-i d/dt)^p F. Equals E_0 identically.
    """
    n = invariants.n
    if rd.derivs.size < n:
        msg = f"Need at least {n} response derivatives for n={n}, got {rd.derivs.size}"
        logger.error(msg)
        raise InvalidInputError(msg)

    big_i = invariants.traces_invariants
    total = 0.0 + 0.0j
    for k in range(n):
        p = n - 1 - k
        total += big_i[k] / math.factorial(k) * ((-1) ** p) * rd.derivs[p]
    return complex(((-1) ** (n - 1)) * total)


# Explicit brackets. Each entry returns [c_0, ..., c_{N-1}], the scalar
# multiplying H^n; t2..t4 are tr(H^2)..tr(H^4) and D[k] = (d/dt)^k F_N.


def _su2_brackets(t2, t3, t4, D) -> List[complex]:
    return [-1j * D[1], D[0]]


def _su3_brackets(t2, t3, t4, D) -> List[complex]:
    return [
        -(0.5 * t2 * D[0] + D[2]),
        -1j * D[1],
        D[0],
    ]


def _su4_brackets(t2, t3, t4, D) -> List[complex]:
    return [
        -t3 / 3.0 * D[0] + 0.5j * t2 * D[1] + 1j * D[3],
        -(0.5 * t2 * D[0] + D[2]),
        -1j * D[1],
        D[0],
    ]


def _su5_brackets(t2, t3, t4, D) -> List[complex]:
    return [
        t2**2 / 8.0 * D[0] - t4 / 4.0 * D[0] + t3 / 3.0 * 1j * D[1] + 0.5 * t2 * D[2] + D[4],
        -t3 / 3.0 * D[0] + 0.5j * t2 * D[1] + 1j * D[3],
        -(0.5 * t2 * D[0] + D[2]),
        -1j * D[1],
        D[0],
    ]


_BRACKETS: Dict[int, Callable[..., List[complex]]] = {
    2: _su2_brackets,
    3: _su3_brackets,
    4: _su4_brackets,
    5: _su5_brackets,
}


def explicit_coeffs(n: int, traces: Sequence[complex], derivs: Sequence[complex]) -> npt.NDArray[np.complex128]:
    """Scalar coefficients of H^0..H^(N-1) in the explicit SU(N) bracket.

    Args:
        n: Rank N in 2..5
        traces: [tr H, tr H^2, ...], at least min(N, 4) entries
        derivs: (-i d/dt)^p F_N(t) for p = 0..N-1

    Returns:
        npt.NDArray[np.complex128]: c_0..c_{N-1}

    Raises:
        UnsupportedOrderError: If N is outside 2..5
    """
    if n not in _BRACKETS:
        msg = f"Explicit forms exist only for N in {EXPLICIT_ORDERS}, got {n}"
        logger.error(msg)
        raise UnsupportedOrderError(msg)

    if len(derivs) < n:
        msg = f"Need at least {n} response derivatives, got {len(derivs)}"
        logger.error(msg)
        raise InvalidInputError(msg)

    padded = [complex(x) for x in traces] + [0.0j] * 4
    t2, t3, t4 = padded[1], padded[2], padded[3]
    d_dt = [(1j**p) * complex(derivs[p]) for p in range(n)]
    return np.array(_BRACKETS[n](t2, t3, t4, d_dt), dtype=np.complex128)


def _as_traceless(h: Any) -> HermitianTraceless:
    return h if isinstance(h, HermitianTraceless) else HermitianTraceless(h)


def su_explicit(h: Any, t: float, n: Optional[int] = None) -> ComplexMatrix:
    """exp(itH) from the explicit SU(N) bracket, N = 2..5.

    Each d/dt in the bracket acts on F_N and is wired to the response
    derivative stack.

    Args:
        h: Traceless hermitian generator
        t: Time parameter
        n: Expected rank; defaults to the dimension of h

    Returns:
        ComplexMatrix: exp(itH)

    Raises:
        UnsupportedOrderError: If the rank is outside 2..5
        InvalidInputError: If n disagrees with the dimension of h
    """
    h = _as_traceless(h)
    rank = h.n if n is None else n
    if rank != h.n:
        msg = f"Requested N={rank} but the generator is {h.n}x{h.n}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if rank not in _BRACKETS:
        msg = f"Explicit forms exist only for N in {EXPLICIT_ORDERS}, got {rank}"
        logger.error(msg)
        raise UnsupportedOrderError(msg)

    spec = eig_hermitian(h)
    rd = response_derivs(spec, t, rank - 1)
    traces = trace_powers(h.matrix, 4)
    coeffs = explicit_coeffs(rank, traces, rd.derivs)
    return _assemble(power_ladder(np.asarray(h.matrix), rank - 1), coeffs)


def sun_hierarchy_check(h: Any, t: float, tol: float = 1e-12) -> HierarchyReport:
    """Compare the rank-N expansion with the rank-(N-1) bracket applied to F_N.

    Dropping the unit term of the rank-N coefficients and decrementing the
    powers of H must reproduce the rank-(N-1) bracket with F_{N-1} replaced
    by F_N and the trace invariants left unchanged. The unit term itself
    must match its trace-invariant form.

    Args:
        h: Traceless hermitian generator with N in 3..5
        t: Time parameter
        tol: Acceptance threshold, relative to the largest coefficient

    Returns:
        HierarchyReport: Deviations found
    """
    h = _as_traceless(h)
    rank = h.n
    if rank not in (3, 4, 5):
        msg = f"Hierarchy check needs N in 3..5, got {rank}"
        logger.error(msg)
        raise UnsupportedOrderError(msg)

    spec = eig_hermitian(h)
    invariants = sym_from_spectrum(spec)
    rd = response_derivs(spec, t, rank - 1)
    traces = trace_powers(h.matrix, 4)

    upper = exp_coeffs(invariants, rd).e
    lower = explicit_coeffs(rank - 1, traces, rd.derivs)
    unit_explicit = explicit_coeffs(rank, traces, rd.derivs)[0]

    scale = max(1.0, float(np.max(np.abs(upper))))
    coefficient_deviation = float(np.max(np.abs(upper[1:] - lower))) / scale
    unit_deviation = abs(unit_explicit - unit_term(invariants, rd)) / scale

    report = HierarchyReport(
        n=rank,
        coefficient_deviation=coefficient_deviation,
        unit_term_deviation=unit_deviation,
        tol=tol,
    )
    logger.debug(f"Hierarchy check N={rank}, t={t}: max deviation {report.max_deviation:.2e}")
    return report


def su_membership(u: Any) -> Tuple[float, float]:
    """(||U U^dagger - I||_max, |det U - 1|) for a candidate SU(N) element."""
    u = as_complex_matrix(u)
    identity = np.eye(u.shape[0], dtype=np.complex128)
    return max_norm(u @ u.conj().T - identity), abs(determinant(u) - 1.0)


def expm_ch_batch(matrices: Sequence[Any], t: float) -> List[ComplexMatrix]:
    """expm_ch over independent matrices; results follow input order."""
    return [expm_ch(m, t) for m in matrices]


def expm_oracle_batch(matrices: Sequence[Any], t: float) -> List[ComplexMatrix]:
    """expm_oracle over independent matrices; results follow input order."""
    return [expm_oracle(m, t) for m in matrices]


def su_explicit_batch(generators: Sequence[Any], t: float) -> List[ComplexMatrix]:
    """su_explicit over independent generators; results follow input order."""
    return [su_explicit(h, t) for h in generators]
