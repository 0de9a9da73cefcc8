"""Elementary symmetric invariants from eigenvalues and from traces of powers."""

import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt

from sun_expm.config import INVARIANT_RTOL, logger
from sun_expm.errors import InvalidInputError, NumericalFailureError, UnsupportedOrderError
from sun_expm.ops.matrix_core import determinant
from sun_expm.ops.spectra import Spectrum

# warn when |S_m| spans more than this many decades
COEFFICIENT_SPAN_DECADES = 12


@dataclass(frozen=True, eq=False)
class SymmetricInvariants:
    """Elementary symmetric polynomials S_0..S_N of a spectrum.

    Attributes:
        n: Dimension N
        s: S_0..S_N (S_0 = 1), complex128 of length N + 1
        power_sums: tr(M^p) for p = 1..N
    """

    n: int
    s: npt.NDArray[np.complex128]
    power_sums: npt.NDArray[np.complex128]

    @property
    def traces_invariants(self) -> npt.NDArray[np.complex128]:
        """I_m = m! S_m for m = 0..N."""
        factorials = np.array([math.factorial(m) for m in range(self.n + 1)], dtype=float)
        return self.s * factorials


def _check_coefficient_growth(s: npt.NDArray[np.complex128]) -> None:
    magnitudes = np.abs(s[np.abs(s) > 0])
    if magnitudes.size and np.log10(magnitudes.max() / magnitudes.min()) > COEFFICIENT_SPAN_DECADES:
        logger.warning(
            f"Symmetric invariants span more than {COEFFICIENT_SPAN_DECADES} orders of magnitude; "
            "polynomial coefficients mix disparate scales"
        )


def sym_from_spectrum(spec: Spectrum) -> SymmetricInvariants:
    """S_m as sums of m-fold eigenvalue products.

    Expands prod_k (1 + t lambda_k) one factor at a time, which equals the
    subset sum and costs O(N^2).

    Args:
        spec: Eigenvalue spectrum

    Returns:
        SymmetricInvariants: S_0..S_N with power sums of the eigenvalues
    """
    values = np.asarray(spec.values, dtype=np.complex128)
    n = values.size
    s = np.zeros(n + 1, dtype=np.complex128)
    s[0] = 1.0
    for k, lam in enumerate(values, start=1):
        s[1 : k + 1] = s[1 : k + 1] + lam * s[0:k]
    power_sums = np.array([np.sum(values**p) for p in range(1, n + 1)], dtype=np.complex128)
    _check_coefficient_growth(s)
    return SymmetricInvariants(n=n, s=s, power_sums=power_sums)


def banded_trace_matrix(power_sums: Sequence[complex], m: int) -> npt.NDArray[np.complex128]:
    """The m x m matrix whose determinant is I_m = m! S_m.

    Row i holds tr(M^(i+1)), tr(M^i), ..., tr(M) left of the diagonal and
    the integer m-1-i just right of it.
    """
    p = np.asarray(power_sums, dtype=np.complex128)
    band = np.zeros((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(i + 1):
            band[i, j] = p[i - j]
        if i + 1 < m:
            band[i, i + 1] = m - 1 - i
    return band


def _banded_invariant_det(power_sums: Sequence[complex], m: int) -> complex:
    if m == 0:
        return 1.0 + 0.0j
    return determinant(banded_trace_matrix(power_sums, m))


def _newton_recurrence(power_sums: npt.NDArray[np.complex128], n: int) -> npt.NDArray[np.complex128]:
    s = np.zeros(n + 1, dtype=np.complex128)
    s[0] = 1.0
    for m in range(1, n + 1):
        total = 0.0 + 0.0j
        for k in range(1, m + 1):
            sign = 1.0 if (k - 1) % 2 == 0 else -1.0
            total += sign * s[m - k] * power_sums[k - 1]
        s[m] = total / m
    return s


def sym_from_traces(
    power_sums: Sequence[complex],
    n: int,
    rtol: float = INVARIANT_RTOL,
) -> SymmetricInvariants:
    """S_m computed directly from traces of powers, two independent ways.

    The Newton recurrence m S_m = sum_k (-1)^(k-1) S_(m-k) tr(M^k) is returned;
    the determinant form I_m / m! is evaluated alongside and must agree.

    Args:
        power_sums: tr(M^p) for p = 1.. (at least n entries)
        n: Dimension N
        rtol: Agreement tolerance between the two evaluations

    Returns:
        SymmetricInvariants: S_0..S_N from the Newton recurrence

    Raises:
        InvalidInputError: If fewer than n power sums are given
        NumericalFailureError: If the two evaluations disagree
    """
    p = np.asarray(power_sums, dtype=np.complex128).ravel()
    if n < 1 or p.size < n:
        msg = f"Need at least n={n} power sums, got {p.size}"
        logger.error(msg)
        raise InvalidInputError(msg)
    p = p[:n]

    s = _newton_recurrence(p, n)

    # characteristic eigenvalue scale from the power sums
    rho = max((abs(p[k - 1]) / n) ** (1.0 / k) for k in range(1, n + 1))
    worst = 0.0
    for m in range(1, n + 1):
        from_det = _banded_invariant_det(p, m) / math.factorial(m)
        scale = max(abs(s[m]), abs(from_det), (n * rho) ** m / math.factorial(m))
        gap = abs(from_det - s[m])
        if scale > 0:
            worst = max(worst, gap / scale)
        if gap > rtol * scale:
            msg = (
                f"Determinant form and Newton recurrence disagree at m={m}: "
                f"|diff| = {gap:.3e}, scale {scale:.3e}"
            )
            logger.error(msg)
            raise NumericalFailureError(msg, diagnostic=gap / scale if scale else gap)

    logger.debug(f"Invariant double computation agrees for n={n}, worst relative gap {worst:.2e}")
    _check_coefficient_growth(s)
    return SymmetricInvariants(n=n, s=s, power_sums=p.copy())


def explicit_low_invariants(power_sums: Sequence[complex], m: int) -> complex:
    """Closed-form trace invariants I_0..I_4.

    Args:
        power_sums: [tr M, tr M^2, ...] with at least m entries
        m: Order 0..4

    Returns:
        complex: I_m, equal to m! S_m

    Raises:
        UnsupportedOrderError: If m > 4
        InvalidInputError: If too few power sums are given
    """
    if m < 0 or m > 4:
        msg = f"Closed forms exist only for m = 0..4, got {m}"
        logger.error(msg)
        raise UnsupportedOrderError(msg)

    p = [complex(x) for x in power_sums]
    if len(p) < m:
        msg = f"Need at least {m} power sums, got {len(p)}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if m == 0:
        return 1.0 + 0.0j
    t1 = p[0]
    if m == 1:
        return t1
    t2 = p[1]
    if m == 2:
        return t1**2 - t2
    t3 = p[2]
    if m == 3:
        return t1**3 - 3 * t1 * t2 + 2 * t3
    t4 = p[3]
    return t1**4 - 6 * t1**2 * t2 + 8 * t1 * t3 + 3 * t2**2 - 6 * t4


def charpoly_coeffs(invariants: SymmetricInvariants) -> npt.NDArray[np.complex128]:
    """Coefficients of C(z) = det(zI - M), highest degree first.

    C(z) = sum_m (-1)^m S_m z^(N-m); the leading coefficient is exactly 1.
    """
    signs = np.array([(-1.0) ** m for m in range(invariants.n + 1)])
    coeffs = signs * invariants.s
    coeffs[0] = 1.0
    return coeffs


def generating_function(invariants: SymmetricInvariants, t: Any) -> complex:
    """Evaluate sum_m t^m S_m, which equals det(I + tM)."""
    powers = np.asarray(t, dtype=np.complex128) ** np.arange(invariants.n + 1)
    return complex(np.sum(powers * invariants.s))


def invariants_of(matrix: Any, n: Optional[int] = None) -> SymmetricInvariants:
    """Convenience: sym_from_traces(trace_powers(M, N), N)."""
    from sun_expm.ops.matrix_core import as_complex_matrix, trace_powers

    matrix = as_complex_matrix(matrix)
    n = n or matrix.shape[0]
    return sym_from_traces(trace_powers(matrix, n), n)
