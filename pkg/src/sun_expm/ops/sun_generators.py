"""Spin-j SU(2) generators, their closed-form checks, and seeded random generators."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from sun_expm.config import logger
from sun_expm.errors import InvalidInputError
from sun_expm.ops.invariants import charpoly_coeffs, sym_from_spectrum
from sun_expm.ops.matrix_core import HermitianTraceless
from sun_expm.ops.spectra import eig_hermitian

# largest 2j accepted by the exact-arithmetic checks
MAX_TWO_J = 20
MAX_MOMENT_ORDER = 5

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator; the state is a 64-bit integer held by the caller.

    The stream depends only on the seed, never on the platform or numpy
    version, so seeded test matrices are reproducible bit for bit.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def gaussians(self, count: int) -> npt.NDArray[np.float64]:
        """Standard normal draws by the Box-Muller transform."""
        out = np.empty(count, dtype=np.float64)
        for k in range(0, count, 2):
            u1 = 1.0 - self.next_float()
            u2 = self.next_float()
            radius = math.sqrt(-2.0 * math.log(u1))
            out[k] = radius * math.cos(2.0 * math.pi * u2)
            if k + 1 < count:
                out[k + 1] = radius * math.sin(2.0 * math.pi * u2)
        return out


RandomSource = Union[int, SplitMix64]


def _rng(source: RandomSource) -> SplitMix64:
    return source if isinstance(source, SplitMix64) else SplitMix64(source)


def as_spin(j: Any) -> Fraction:
    """Parse j (int, float, str such as "3/2", or Fraction) as a half-integer.

    Raises:
        InvalidInputError: If 2j is not a non-negative integer
    """
    try:
        if isinstance(j, float):
            twice = round(2.0 * j)
            value = Fraction(twice, 2) if abs(2.0 * j - twice) <= 1e-12 else Fraction(j)
        else:
            value = Fraction(j)
    except (TypeError, ValueError, ZeroDivisionError, OverflowError) as e:
        msg = f"Spin j must be a half-integer, got {j!r}"
        logger.error(msg)
        raise InvalidInputError(msg) from e

    if value < 0 or (2 * value).denominator != 1:
        msg = f"Spin j must be a non-negative half-integer, got {j!r}"
        logger.error(msg)
        raise InvalidInputError(msg)
    return value


def _check_two_j(j: Fraction) -> int:
    two_j = int(2 * j)
    if two_j > MAX_TWO_J:
        msg = f"2j must be at most {MAX_TWO_J}, got {two_j}"
        logger.error(msg)
        raise InvalidInputError(msg)
    return two_j


def spin_matrices(j: Any) -> Tuple[npt.NDArray[np.complex128], ...]:
    """(J_x, J_y, J_z) in the basis m = j, j-1, ..., -j, Condon-Shortley phases.

    J_+ has entries sqrt(j(j+1) - k(k-1)) at (i, i+1) with k = j - i.
    """
    j = as_spin(j)
    dim = int(2 * j) + 1
    jf = float(j)
    raising = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim - 1):
        k = jf - i
        raising[i, i + 1] = math.sqrt(jf * (jf + 1.0) - k * (k - 1.0))
    lowering = raising.T.copy()
    jx = (raising + lowering) / 2.0
    jy = (raising - lowering) / 2j
    jz = np.diag(np.arange(jf, -jf - 0.5, -1.0)).astype(np.complex128)
    return jx, jy, jz


@dataclass(frozen=True, eq=False)
class SpinGenerator:
    """The generator n.J of the spin-j embedding of SU(2) into SU(2j+1).

    Attributes:
        j: Spin
        axis: Unit 3-vector n
        matrix: n_x J_x + n_y J_y + n_z J_z
    """

    j: Fraction
    axis: Tuple[float, float, float]
    matrix: HermitianTraceless

    @property
    def dim(self) -> int:
        return int(2 * self.j) + 1

    @property
    def casimir(self) -> Fraction:
        return self.j * (self.j + 1)


def spin_generator(j: Any, axis: Sequence[float] = (0.0, 0.0, 1.0)) -> SpinGenerator:
    """Build n.J for spin j.

    Args:
        j: Non-negative half-integer
        axis: Unit 3-vector

    Returns:
        SpinGenerator: The generator

    Raises:
        InvalidInputError: If j is not a half-integer or the axis is not unit
    """
    spin = as_spin(j)
    n = np.asarray(axis, dtype=np.float64).ravel()
    if n.size != 3 or abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
        msg = f"Axis must be a unit 3-vector, got {list(axis)}"
        logger.error(msg)
        raise InvalidInputError(msg)

    jx, jy, jz = spin_matrices(spin)
    matrix = n[0] * jx + n[1] * jy + n[2] * jz
    return SpinGenerator(j=spin, axis=(float(n[0]), float(n[1]), float(n[2])), matrix=HermitianTraceless(matrix))


@dataclass(frozen=True, eq=False)
class CharpolyReport:
    """Coefficients of C(lambda) for n.J against prod_k (lambda - (j - k))."""

    j: Fraction
    coefficients: npt.NDArray[np.complex128]
    expected: npt.NDArray[np.float64]
    max_deviation: float
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def spin_charpoly_check(j: Any, axis: Sequence[float] = (0.0, 0.0, 1.0)) -> CharpolyReport:
    """Check the characteristic polynomial of n.J against its finite product.

    C(lambda) = prod_{k=0}^{2j} (lambda - (j - k)), also written as
    Gamma(lambda + j + 1) / Gamma(lambda - j). The coefficients are expanded
    from the Jacobi eigenvalues, and the deviation is measured
    coefficientwise relative to the largest expected coefficient.
    """
    spin = as_spin(j)
    _check_two_j(spin)
    generator = spin_generator(spin, axis)
    n = generator.dim
    invariants = sym_from_spectrum(eig_hermitian(generator.matrix))
    coefficients = charpoly_coeffs(invariants)
    expected = np.poly([float(spin - k) for k in range(n)])

    deviation = float(np.max(np.abs(coefficients - expected)) / np.max(np.abs(expected)))
    logger.debug(f"Characteristic polynomial check j={spin}: deviation {deviation:.2e}")
    return CharpolyReport(j=spin, coefficients=coefficients, expected=expected, max_deviation=deviation)


def character(j: Any, x: complex) -> complex:
    """sinh((2j+1) x / 2) / sinh(x / 2), the character of exp(x n.J).

    Returns 2j+1 for |x| < 1e-8 and falls back to sum_k exp(x (j - k)) where
    sinh(x/2) is too small to divide by.
    """
    spin = as_spin(j)
    dim = int(2 * spin) + 1
    x = complex(x)
    if abs(x) < 1e-8:
        return complex(dim)

    denominator = np.sinh(x / 2.0)
    if abs(denominator) < 1e-8:
        jf = float(spin)
        return complex(sum(np.exp(x * (jf - k)) for k in range(dim)))
    return complex(np.sinh(dim * x / 2.0) / denominator)


def character_series(j: Any) -> Tuple[Fraction, Fraction, Fraction]:
    """Exact coefficients of x^0, x^2, x^4 in the character expansion.

    (2j+1), (2j+1) j(j+1) / 6 and (2j+1) j(j+1) (3 j(j+1) - 1) / 360.
    """
    spin = as_spin(j)
    c = spin * (spin + 1)
    dim = 2 * spin + 1
    return dim, dim * c / 6, dim * c * (3 * c - 1) / 360


def spin_trace_moments(j: Any, kmax: int) -> List[Fraction]:
    """Exact tr[(n.J)^(2k)] for k = 0..kmax, as sums over the spectrum j..-j.

    Entry 0 is the dimension 2j+1; entry 1 is j(j+1)(2j+1)/3.

    Raises:
        InvalidInputError: If 2j > 20 or kmax outside 0..5
    """
    spin = as_spin(j)
    two_j = _check_two_j(spin)
    if not 0 <= kmax <= MAX_MOMENT_ORDER:
        msg = f"kmax must lie in 0..{MAX_MOMENT_ORDER}, got {kmax}"
        logger.error(msg)
        raise InvalidInputError(msg)

    eigenvalues = [spin - k for k in range(two_j + 1)]
    return [sum((m ** (2 * k) for m in eigenvalues), Fraction(0)) for k in range(kmax + 1)]


def casimir_polynomial_check(k: int, jmax: Any = 10) -> bool:
    """tr[(n.J)^(2k)] / (2j+1) is a degree-k polynomial in c = j(j+1).

    The polynomial is fixed exactly by Lagrange interpolation through the
    first k+1 spins 0, 1/2, 1, ...; every further spin up to jmax must lie
    on it.
    """
    top = as_spin(jmax)
    spins = [Fraction(m, 2) for m in range(int(2 * top) + 1)]
    if len(spins) < k + 2:
        msg = f"Need at least {k + 2} spins up to jmax={jmax} to test degree {k}"
        logger.error(msg)
        raise InvalidInputError(msg)

    samples = [(s * (s + 1), spin_trace_moments(s, k)[k] / (2 * s + 1)) for s in spins]
    nodes = samples[: k + 1]

    def interpolate(c: Fraction) -> Fraction:
        total = Fraction(0)
        for a, (ca, va) in enumerate(nodes):
            term = va
            for b, (cb, _) in enumerate(nodes):
                if a != b:
                    term *= (c - cb) / (ca - cb)
            total += term
        return total

    return all(interpolate(c) == value for c, value in samples[k + 1 :])


def random_traceless_hermitian(n: int, seed: RandomSource) -> HermitianTraceless:
    """GUE-style draw: (A + A^dagger)/2 minus its trace part, A with Gaussian entries.

    Args:
        n: Dimension (>= 2)
        seed: Integer seed or a caller-held SplitMix64 stream

    Returns:
        HermitianTraceless: The draw
    """
    if n < 2:
        msg = f"Random generators need n >= 2, got {n}"
        logger.error(msg)
        raise InvalidInputError(msg)

    rng = _rng(seed)
    draws = rng.gaussians(2 * n * n)
    a = (draws[: n * n] + 1j * draws[n * n :]).reshape(n, n)
    h = 0.5 * (a + a.conj().T)
    h -= (np.trace(h).real / n) * np.eye(n)
    return HermitianTraceless(h)


def random_traceless_batch(n: int, count: int, seed: RandomSource) -> List[HermitianTraceless]:
    """count independent draws from one stream."""
    rng = _rng(seed)
    return [random_traceless_hermitian(n, rng) for _ in range(count)]


def random_complex_matrix(n: int, seed: RandomSource) -> npt.NDArray[np.complex128]:
    """General complex matrix with independent standard Gaussian entries."""
    if n < 1:
        msg = f"Matrix dimension must be at least 1, got {n}"
        logger.error(msg)
        raise InvalidInputError(msg)
    rng = _rng(seed)
    draws = rng.gaussians(2 * n * n)
    return (draws[: n * n] + 1j * draws[n * n :]).reshape(n, n)
