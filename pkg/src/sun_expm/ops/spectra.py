"""Eigenvalue computation: cyclic Jacobi for hermitian input, Aberth-Ehrlich otherwise."""

from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from sun_expm.config import ABERTH_MAX_ITER, CLUSTER_RTOL, JACOBI_MAX_SWEEPS, logger
from sun_expm.errors import InvalidInputError, NumericalFailureError
from sun_expm.ops.matrix_core import (
    HermitianTraceless,
    as_complex_matrix,
    is_hermitian,
    max_norm,
    trace_powers,
)

ABERTH_SOFT_LIMIT = 16


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted by descending real part, then descending imaginary part.

    Attributes:
        values: The N eigenvalues (complex128)
        clusters: Groups of 0-based positions into ``values`` that agree
            within the clustering tolerance; the groups partition 0..N-1
    """

    values: npt.NDArray[np.complex128]
    clusters: List[List[int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def is_degenerate(self) -> bool:
        return any(len(group) > 1 for group in self.clusters)

    def cluster_of(self, k: int) -> List[int]:
        """Return the cluster containing position k."""
        for group in self.clusters:
            if k in group:
                return group
        return [k]

    @classmethod
    def from_values(cls, values: Any, tol: Optional[float] = None) -> "Spectrum":
        """Sort raw eigenvalues and attach their cluster partition.

        Args:
            values: Eigenvalues in any order
            tol: Absolute clustering tolerance; defaults to CLUSTER_RTOL times
                the spectral diameter

        Returns:
            Spectrum: Sorted spectrum with clusters
        """
        array = np.asarray(values, dtype=np.complex128).ravel()
        if array.size == 0:
            msg = "Spectrum must contain at least one eigenvalue"
            logger.error(msg)
            raise InvalidInputError(msg)
        if not np.all(np.isfinite(array)):
            msg = "Eigenvalues must be finite"
            logger.error(msg)
            raise InvalidInputError(msg)

        order = np.lexsort((-array.imag, -array.real))
        array = array[order]
        if tol is None:
            tol = CLUSTER_RTOL * spectral_diameter(array)
        return cls(values=array, clusters=cluster_spectrum(array, tol))


def spectral_diameter(values: Any) -> float:
    """Largest pairwise distance between eigenvalues."""
    array = np.asarray(values, dtype=np.complex128).ravel()
    if array.size < 2:
        return 0.0
    return float(np.max(np.abs(array[:, None] - array[None, :])))


def cluster_spectrum(values: Sequence[complex], tol: float) -> List[List[int]]:
    """Partition eigenvalue positions by the transitive closure of |a - b| <= tol.

    Args:
        values: Eigenvalues
        tol: Absolute tolerance (>= 0)

    Returns:
        List[List[int]]: Groups of positions, each sorted, ordered by first member

    Raises:
        InvalidInputError: If tol is negative
    """
    if tol < 0:
        msg = f"Clustering tolerance must be non-negative, got {tol}"
        logger.error(msg)
        raise InvalidInputError(msg)

    array = np.asarray(values, dtype=np.complex128).ravel()
    n = array.size
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    close = np.abs(array[:, None] - array[None, :]) <= tol
    for a in range(n):
        for b in range(a + 1, n):
            if close[a, b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda group: group[0])


def eig_hermitian(
    h: HermitianTraceless,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    tol: Optional[float] = None,
) -> Spectrum:
    """Real spectrum of a traceless hermitian matrix by cyclic Jacobi rotations.

    Each rotation zeroes one off-diagonal pair (p, q) with a complex Givens
    rotation; sweeps continue until the off-diagonal Frobenius norm falls
    below 1e-14 * ||H||_F.

    Args:
        h: Traceless hermitian generator
        max_sweeps: Sweep budget
        tol: Clustering tolerance passed to Spectrum.from_values

    Returns:
        Spectrum: Real eigenvalues (imaginary parts identically zero)

    Raises:
        NumericalFailureError: If the sweep budget is exhausted
    """
    a = np.array(h.matrix, dtype=np.complex128)
    n = a.shape[0]
    frob = float(np.linalg.norm(a))
    target = 1e-14 * frob

    def off_norm() -> float:
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    sweeps = 0
    while off_norm() > target:
        if sweeps >= max_sweeps:
            residual = off_norm()
            msg = f"Jacobi iteration did not converge in {max_sweeps} sweeps (off-diagonal norm {residual:.3e})"
            logger.error(msg)
            raise NumericalFailureError(msg, diagnostic=residual)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude == 0.0:
                    continue
                phase = apq / magnitude
                theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s * phase], [-s * np.conj(phase), c]], dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        sweeps += 1
        logger.debug(f"Jacobi sweep {sweeps}: off-diagonal norm {off_norm():.3e}")

    values = np.diag(a).real.astype(np.complex128)
    logger.debug(f"Jacobi converged for n={n} after {sweeps} sweeps")
    return Spectrum.from_values(values, tol=tol)


def _horner(coeffs: npt.NDArray[np.complex128], z: npt.NDArray[np.complex128]):
    value = np.zeros_like(z)
    for c in coeffs:
        value = value * z + c
    return value


def aberth_roots(
    coeffs: Any,
    max_iter: int = ABERTH_MAX_ITER,
) -> npt.NDArray[np.complex128]:
    """Roots of a monic polynomial by Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on a circle around the root centroid, with an angular
    offset that breaks conjugate symmetry. Converged roots get one Newton
    polish step.

    Args:
        coeffs: Polynomial coefficients, highest degree first, leading 1
        max_iter: Iteration budget

    Returns:
        npt.NDArray[np.complex128]: The roots (unsorted)

    Raises:
        NumericalFailureError: If the worst residual stays above
            1e-8 times the largest coefficient magnitude
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    degree = coeffs.size - 1
    if degree < 1:
        return np.empty(0, dtype=np.complex128)
    coeffs = coeffs / coeffs[0]
    if degree == 1:
        return np.array([-coeffs[1]], dtype=np.complex128)

    deriv = coeffs[:-1] * np.arange(degree, 0, -1)
    center = -coeffs[1] / degree
    # root radius bound of p(center + w)
    shifted = np.poly1d(coeffs)(np.poly1d([1.0, center])).coeffs
    bounds = [abs(shifted[k]) ** (1.0 / k) for k in range(1, shifted.size)]
    radius = max(max(bounds), 1e-3 * (1.0 + abs(center)))
    angles = 2.0 * np.pi * np.arange(degree) / degree + 0.4
    z = center + radius * np.exp(1j * angles)

    scale = float(np.max(np.abs(coeffs)))
    for iteration in range(max_iter):
        p = _horner(coeffs, z)
        dp = _horner(deriv, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, p)
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        eps = np.finfo(float).eps
        noise = 8 * eps * _horner(np.abs(coeffs), np.abs(z))
        small_step = np.abs(step) <= 4 * eps * (1.0 + np.abs(z))
        at_noise = np.abs(_horner(coeffs, z)) <= noise
        if np.all(small_step | at_noise):
            logger.debug(f"Aberth converged in {iteration + 1} iterations (degree {degree})")
            break
    else:
        logger.warning(f"Aberth iteration used its full budget of {max_iter} (degree {degree})")

    # one Newton polish step on C
    p = _horner(coeffs, z)
    dp = _horner(deriv, z)
    polish = np.where(np.abs(dp) > 0, p / np.where(dp == 0, 1.0, dp), 0.0)
    candidate = z - polish
    better = np.abs(_horner(coeffs, candidate)) <= np.abs(p)
    z = np.where(better, candidate, z)

    residual = float(np.max(np.abs(_horner(coeffs, z))))
    if residual > 1e-8 * scale:
        msg = f"Aberth iteration stagnated, worst residual {residual:.3e}"
        logger.error(msg)
        raise NumericalFailureError(msg, diagnostic=residual)
    return z


def char_roots_general(matrix: Any, tol: Optional[float] = None) -> Spectrum:
    """Eigenvalues of a general complex matrix from its characteristic polynomial.

    The coefficients of C(z) = sum_m (-1)^m S_m z^(N-m) come from traces of
    powers (Newton identities), and the roots from Aberth-Ehrlich iteration.

    Args:
        matrix: Square complex matrix
        tol: Absolute clustering tolerance; defaults to CLUSTER_RTOL times the
            larger of the spectral diameter and ||M||_max, so that roots of a
            nilpotent matrix still cluster

    Returns:
        Spectrum: Sorted eigenvalues with clusters

    Raises:
        NumericalFailureError: If root finding stagnates
    """
    from sun_expm.ops.invariants import charpoly_coeffs, sym_from_traces

    matrix = as_complex_matrix(matrix)
    n = matrix.shape[0]
    if n > ABERTH_SOFT_LIMIT:
        logger.warning(f"char_roots_general on n={n} exceeds the soft limit {ABERTH_SOFT_LIMIT}; accuracy degrades")

    invariants = sym_from_traces(trace_powers(matrix, n), n)
    roots = aberth_roots(charpoly_coeffs(invariants))
    if tol is None:
        tol = CLUSTER_RTOL * max(spectral_diameter(roots), max_norm(matrix))
    return Spectrum.from_values(roots, tol=tol)


def spectrum_of(matrix: Any, tol: Optional[float] = None) -> Spectrum:
    """Spectrum of any square matrix, choosing the solver by structure.

    Hermitian input goes through Jacobi on its traceless part (the trace
    shift is added back); everything else goes through char_roots_general.
    """
    matrix = as_complex_matrix(matrix)
    if is_hermitian(matrix):
        n = matrix.shape[0]
        shift = np.trace(matrix).real / n
        herm = 0.5 * (matrix + matrix.conj().T) - shift * np.eye(n)
        inner = eig_hermitian(HermitianTraceless(herm))
        return Spectrum.from_values(inner.values.real + shift, tol=tol)
    return char_roots_general(matrix, tol=tol)
