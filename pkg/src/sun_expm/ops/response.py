"""Response function F(t) = sum_k exp(i lambda_k t) / C'(lambda_k) and its derivatives."""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from sun_expm.config import CONFLUENT_RTOL, CONTOUR_POINTS, logger
from sun_expm.errors import DegenerateSpectrumError, InvalidInputError
from sun_expm.ops.spectra import Spectrum, cluster_spectrum, spectral_diameter
from sun_expm.ops.sun_generators import as_spin

RESPONSE_METHODS = ("auto", "residue", "confluent")

# smallest quadrature rule accepted by the contour oracle
MIN_CONTOUR_POINTS = 64


@dataclass(frozen=True, eq=False)
class ResponseDerivs:
    """Derivative stack of the response function at one t.

    Attributes:
        t: Time parameter
        derivs: Entry p is (-i d/dt)^p F(t), p = 0..pmax
        method: "residue" or "confluent", the path that produced the values
    """

    t: float
    derivs: npt.NDArray[np.complex128]
    method: str = "residue"

    @property
    def pmax(self) -> int:
        return int(self.derivs.size) - 1

    def d_dt(self, p: int) -> complex:
        """(d/dt)^p F(t), which equals i^p (-i d/dt)^p F(t)."""
        return complex((1j**p) * self.derivs[p])


def cprime(spec: Spectrum, k: int) -> complex:
    """C'(lambda_k), the product of (lambda_k - lambda_m) over m != k.

    Args:
        spec: Spectrum
        k: 0-based position of the eigenvalue

    Returns:
        complex: The derivative of the characteristic function at lambda_k

    Raises:
        InvalidInputError: If k is out of range
        DegenerateSpectrumError: If lambda_k sits in a degenerate cluster
    """
    if not 0 <= k < spec.n:
        msg = f"Eigenvalue index {k} out of range for n={spec.n}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if len(spec.cluster_of(k)) > 1:
        msg = f"Eigenvalue {k} belongs to a degenerate cluster; use the confluent path"
        logger.error(msg)
        raise DegenerateSpectrumError(msg)

    return _cprime_raw(spec.values, k)


def _cprime_raw(values: npt.NDArray[np.complex128], k: int) -> complex:
    others = np.delete(values, k)
    return complex(np.prod(values[k] - others))


def _min_gap(values: npt.NDArray[np.complex128]) -> float:
    if values.size < 2:
        return math.inf
    gaps = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(gaps, np.inf)
    return float(gaps.min())


def needs_confluent(spec: Spectrum) -> bool:
    """True when the residue sum would divide by a near-zero C'."""
    if spec.is_degenerate:
        return True
    return _min_gap(spec.values) <= CONFLUENT_RTOL * spectral_diameter(spec.values)


def _residue_derivs(values: npt.NDArray[np.complex128], t: float, pmax: int) -> npt.NDArray[np.complex128]:
    n = values.size
    weights = np.empty(n, dtype=np.complex128)
    for k in range(n):
        denominator = _cprime_raw(values, k)
        if denominator == 0:
            msg = "Repeated eigenvalue in residue sum; use the confluent path"
            logger.error(msg)
            raise DegenerateSpectrumError(msg)
        weights[k] = np.exp(1j * values[k] * t) / denominator

    derivs = np.empty(pmax + 1, dtype=np.complex128)
    moment = np.ones(n, dtype=np.complex128)
    for p in range(pmax + 1):
        derivs[p] = np.sum(moment * weights)
        moment = moment * values
    return derivs


def _merged_nodes(spec: Spectrum) -> List[List[int]]:
    """Union of the spectrum's own clusters with the confluent crossover clusters."""
    n = spec.n
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    crossover = cluster_spectrum(spec.values, CONFLUENT_RTOL * spectral_diameter(spec.values))
    for group in list(spec.clusters) + crossover:
        for member in group[1:]:
            ra, rb = find(group[0]), find(member)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda group: group[0])


def _taylor_coeffs(x: complex, t: float, p: int, order: int) -> List[complex]:
    """Taylor coefficients c_0..c_order of z^p exp(izt) around x."""
    base = np.exp(1j * x * t)
    coeffs = []
    for j in range(order + 1):
        total = 0.0 + 0.0j
        for a in range(min(p, j) + 1):
            b = j - a
            total += math.comb(p, a) * x ** (p - a) * (1j * t) ** b / math.factorial(b)
        coeffs.append(complex(total * base))
    return coeffs


def confluent_divided_difference(nodes: Sequence[complex], t: float, p: int) -> complex:
    """Highest-order divided difference of z^p exp(izt) over nodes with repeats.

    Equal nodes must be adjacent; on their diagonals the table is filled
    with Taylor coefficients instead of difference quotients.
    """
    x = np.asarray(nodes, dtype=np.complex128)
    n = x.size
    taylor = {}
    for value in dict.fromkeys(complex(v) for v in x):
        count = int(np.count_nonzero(x == value))
        taylor[value] = _taylor_coeffs(value, t, p, count - 1)

    coef = np.empty(n, dtype=np.complex128)
    for i in range(n):
        coef[i] = taylor[complex(x[i])][0]

    for j in range(1, n):
        for i in range(n - j):
            if x[i + j] == x[i]:
                coef[i] = taylor[complex(x[i])][j]
            else:
                coef[i] = (coef[i + 1] - coef[i]) / (x[i + j] - x[i])
    return complex(coef[0])


def _confluent_derivs(spec: Spectrum, t: float, pmax: int) -> npt.NDArray[np.complex128]:
    nodes: List[complex] = []
    for group in _merged_nodes(spec):
        center = complex(np.mean(spec.values[group]))
        nodes.extend([center] * len(group))
    return np.array(
        [confluent_divided_difference(nodes, t, p) for p in range(pmax + 1)],
        dtype=np.complex128,
    )


def response_derivs(
    spec: Spectrum,
    t: float,
    pmax: int,
    method: str = "auto",
) -> ResponseDerivs:
    """Evaluate (-i d/dt)^p F(t) for p = 0..pmax.

    The residue path weights exp(i lambda_k t) / C'(lambda_k) by lambda_k^p.
    The confluent path takes the (N-1)-th divided difference of z^p exp(izt)
    over the eigenvalue nodes, merging nodes closer than the crossover
    tolerance to their cluster mean.

    Args:
        spec: Spectrum of the generator
        t: Time parameter
        pmax: Highest derivative order (0 <= pmax <= 2N)
        method: "auto" picks the confluent path when the minimum gap is at
            most CONFLUENT_RTOL times the spectral diameter; "residue" and
            "confluent" force a path

    Returns:
        ResponseDerivs: The derivative stack

    Raises:
        InvalidInputError: If pmax or t or method is out of range
        DegenerateSpectrumError: If "residue" is forced on repeated eigenvalues
    """
    if method not in RESPONSE_METHODS:
        msg = f"Unknown response method '{method}', expected one of {RESPONSE_METHODS}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if pmax < 0 or pmax > 2 * spec.n:
        msg = f"pmax must lie in 0..{2 * spec.n} for n={spec.n}, got {pmax}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if not math.isfinite(t):
        msg = f"t must be finite, got {t}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if method == "auto":
        method = "confluent" if needs_confluent(spec) else "residue"

    if method == "residue":
        derivs = _residue_derivs(spec.values, t, pmax)
    else:
        derivs = _confluent_derivs(spec, t, pmax)

    logger.debug(f"Response derivatives for n={spec.n}, t={t}, pmax={pmax} via {method}")
    return ResponseDerivs(t=float(t), derivs=derivs, method=method)


def spin_response(j, theta: float) -> complex:
    """Closed-form response function of the spin-j embedding of SU(2).

    F_{2j+1}(theta) = (2i)^{2j} / (2j)! * sin^{2j}(theta / 2)

    Args:
        j: Spin, a non-negative half-integer
        theta: Rotation angle

    Returns:
        complex: F evaluated on the spectrum {j, j-1, ..., -j}
    """
    two_j = int(2 * as_spin(j))
    i_power = (1, 1j, -1, -1j)[two_j % 4]
    prefactor = (2**two_j) * i_power / math.factorial(two_j)
    return complex(prefactor * math.sin(theta / 2.0) ** two_j)


def response_contour_oracle(
    spec: Spectrum,
    t: float,
    radius: Optional[float] = None,
    npoints: int = CONTOUR_POINTS,
    p: int = 0,
) -> complex:
    """Contour-integral reference for (-i d/dt)^p F(t).

    Trapezoidal rule for (1/2 pi i) times the counter-clockwise integral of
    z^p exp(itz) / C(z) over the circle |z| = radius. The 1/(2 pi i) factor
    makes the integral equal the residue sum.

    Args:
        spec: Spectrum providing the poles
        t: Time parameter
        radius: Circle radius; defaults to 1.5 * max|lambda| + 1
        npoints: Number of quadrature nodes (>= 64)
        p: Moment order

    Returns:
        complex: Quadrature value

    Raises:
        InvalidInputError: If the circle does not enclose every eigenvalue
            or too few nodes are requested
    """
    largest = float(np.max(np.abs(spec.values)))
    if radius is None:
        radius = 1.5 * largest + 1.0

    if radius <= largest:
        msg = f"Contour radius {radius} does not enclose all eigenvalues (max |lambda| = {largest})"
        logger.error(msg)
        raise InvalidInputError(msg)

    if npoints < MIN_CONTOUR_POINTS:
        msg = f"npoints must be at least {MIN_CONTOUR_POINTS}, got {npoints}"
        logger.error(msg)
        raise InvalidInputError(msg)

    z = radius * np.exp(2j * np.pi * np.arange(npoints) / npoints)
    char = np.prod(z[:, None] - spec.values[None, :], axis=1)
    integrand = z**p * np.exp(1j * t * z) / char
    # dz = i z dphi, the i cancels against 1/(2 pi i)
    return complex(np.mean(integrand * z))
