"""Traceless real spectra as projections of simplex vertices, and angle maps for N = 3, 4, 5.

The spectrum of a traceless hermitian H is a point on the sphere of radius
r = sqrt(tr H^2) inside the hyperplane sum(lambda) = 0. Projecting the
vertices of the regular (N-1)-simplex inscribed in that sphere onto the
direction of the spectrum returns the eigenvalues, and the orientation of
the simplex relative to the axis is fixed by N-2 angles.
"""

import math
from dataclasses import dataclass
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from sun_expm.config import logger
from sun_expm.errors import InconsistentInvariantsError, InvalidInputError, UnsupportedOrderError
from sun_expm.ops.spectra import cluster_spectrum

ANGLE_ORDERS = (3, 4, 5)

# slack on |cos| arguments before they count as inconsistent
ARCCOS_SLACK = 1e-12

# below this fraction of r an angle is not determined by the spectrum
GIMBAL_RTOL = 1e-12

# SU(4) inverse: roots closer than this fraction of r are candidates for merging
SU4_CLUSTER_RTOL = 1e-4

# a merge is kept only if the power sums still match to this relative error
SU4_MERGE_RTOL = 1e-13

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT5 = math.sqrt(5.0)
SQRT6 = math.sqrt(6.0)


@dataclass(frozen=True, eq=False)
class SimplexVertexSet:
    """Vertices f_k of the regular (N-1)-simplex on the sphere of radius r.

    Attributes:
        n: Dimension N
        r: Radius
        vertices: Row k holds f_k, shape (N, N)
    """

    n: int
    r: float
    vertices: npt.NDArray[np.float64]

    def gram(self) -> npt.NDArray[np.float64]:
        """Matrix of inner products f_k . f_m."""
        return self.vertices @ self.vertices.T


@dataclass(frozen=True)
class AngleParams:
    """Radius plus the N-2 hyperspherical angles of a traceless real spectrum.

    Attributes:
        n: Dimension N (3, 4 or 5)
        r: Radius, sqrt(tr H^2)
        angles: (theta,) for N=3, (theta, phi) for N=4, (psi, theta, phi) for N=5
        gimbal: True when some angle is undetermined and was set to 0
    """

    n: int
    r: float
    angles: Tuple[float, ...]
    gimbal: bool = False

    def __post_init__(self) -> None:
        if self.r < 0 or not math.isfinite(self.r):
            msg = f"Radius must be finite and non-negative, got {self.r}"
            logger.error(msg)
            raise InvalidInputError(msg)

        if self.n not in ANGLE_ORDERS:
            msg = f"Angle parameterization exists only for N in {ANGLE_ORDERS}, got {self.n}"
            logger.error(msg)
            raise UnsupportedOrderError(msg)

        if len(self.angles) != self.n - 2:
            msg = f"N={self.n} needs {self.n - 2} angles, got {len(self.angles)}"
            logger.error(msg)
            raise InvalidInputError(msg)
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))

    @classmethod
    def from_su3_invariants(cls, r2: float, det: float) -> "AngleParams":
        """Build the N=3 parameters from tr(H^2) and det(H)."""
        return cls(n=3, r=math.sqrt(r2), angles=(su3_angle_from_invariants(r2, det),))


@dataclass(frozen=True, eq=False)
class EigenvalueVector:
    """A traceless real spectrum as a vector in N-dimensional Euclidean space."""

    components: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        array = np.asarray(self.components, dtype=np.float64).ravel()
        if array.size < 2 or not np.all(np.isfinite(array)):
            msg = "Eigenvalue vector needs at least two finite components"
            logger.error(msg)
            raise InvalidInputError(msg)

        norm = float(np.linalg.norm(array))
        if abs(array.sum()) > 1e-12 * max(norm, 1e-300) * array.size:
            msg = f"Eigenvalue vector is not traceless: sum = {array.sum():.3e}"
            logger.error(msg)
            raise InvalidInputError(msg)
        object.__setattr__(self, "components", array)

    @property
    def n(self) -> int:
        return int(self.components.size)

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True)
class AngleInvariants:
    """Trace invariants written in terms of the angles.

    tr_h4 and det are None where no closed form is used (N=5).
    """

    tr_h2: float
    tr_h3: float
    tr_h4: Optional[float]
    det: Optional[float]


def simplex_vertices(n: int, r: float) -> SimplexVertexSet:
    """f_k = (e_k - (1/N)(1, ..., 1)) r sqrt(N / (N - 1)).

    Args:
        n: Dimension N (>= 2)
        r: Radius (> 0)

    Returns:
        SimplexVertexSet: Vertices with f_k . f_k = r^2 and f_k . f_m = r^2 / (1 - N)

    Raises:
        InvalidInputError: If n < 2 or r <= 0
    """
    if n < 2:
        msg = f"A simplex needs n >= 2, got {n}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if not r > 0:
        msg = f"Radius must be positive, got {r}"
        logger.error(msg)
        raise InvalidInputError(msg)

    centered = np.eye(n) - np.full((n, n), 1.0 / n)
    return SimplexVertexSet(n=n, r=float(r), vertices=centered * r * math.sqrt(n / (n - 1.0)))


def project_spectrum(vs: SimplexVertexSet, axis: Any) -> EigenvalueVector:
    """lambda_k = sqrt((N-1)/N) f_k . e for a unit axis e in the traceless hyperplane.

    Raises:
        InvalidInputError: If the axis has the wrong size, is not unit, or
            leaves the hyperplane
    """
    e = np.asarray(axis, dtype=np.float64).ravel()
    if e.size != vs.n:
        msg = f"Axis must have {vs.n} components, got {e.size}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if abs(float(np.linalg.norm(e)) - 1.0) > 1e-12:
        msg = f"Axis must be a unit vector, |e| = {np.linalg.norm(e):.15g}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if abs(float(e.sum())) > 1e-10:
        msg = f"Axis must lie in the traceless hyperplane, sum = {e.sum():.3e}"
        logger.error(msg)
        raise InvalidInputError(msg)

    values = math.sqrt((vs.n - 1.0) / vs.n) * (vs.vertices @ e)
    return EigenvalueVector(values)


def angles_to_spectrum(p: AngleParams) -> EigenvalueVector:
    """Evaluate the component formulas of the N=3, 4, 5 parameterizations.

    N=3: lambda_k = sqrt(2/3) r cos(theta + 2 pi k / 3), k = 1, 2, 3.
    N=4 and N=5 follow the tetrahedron and pentatope projections; the
    components come out in that fixed (unsorted) order.
    """
    r = p.r
    if p.n == 3:
        (theta,) = p.angles
        k = np.arange(1, 4)
        return EigenvalueVector(math.sqrt(2.0 / 3.0) * r * np.cos(theta + 2.0 * np.pi * k / 3.0))

    if p.n == 4:
        theta, phi = p.angles
        a = math.sin(phi) * math.sin(theta) / SQRT2
        b = math.cos(phi) * math.sin(theta) / SQRT2
        c = 0.5 * math.cos(theta)
        return EigenvalueVector(r * np.array([-a - c, a - c, -b + c, b + c]))

    psi, theta, phi = p.angles
    cpsi, spsi = math.cos(psi), math.sin(psi)
    base = cpsi / (2.0 * SQRT5)
    tilt = math.cos(theta) * spsi
    lam = [
        -4.0 / (2.0 * SQRT5) * cpsi,
        base - 3.0 / (2.0 * SQRT3) * tilt,
        base + tilt / (2.0 * SQRT3) - 2.0 / SQRT6 * math.cos(phi) * math.sin(theta) * spsi,
        base
        + tilt / (2.0 * SQRT3)
        + math.cos(phi) * math.sin(theta) * spsi / SQRT6
        - math.sin(theta) * math.sin(phi) * spsi / SQRT2,
        base
        + tilt / (2.0 * SQRT3)
        + math.cos(phi) * math.sin(theta) * spsi / SQRT6
        + math.sin(theta) * math.sin(phi) * spsi / SQRT2,
    ]
    return EigenvalueVector(r * np.array(lam))


def invariants_from_angles(p: AngleParams) -> AngleInvariants:
    """Closed-form trace invariants of the N=3, 4, 5 parameterizations.

    N=3: det = r^3 cos(3 theta) / (3 sqrt 6), tr H^3 = 3 det, tr H^4 = (tr H^2)^2 / 2.
    N=4: tr H^3 = (3/4) r^3 sin(theta) sin(2 theta) cos(2 phi) and
    det = (r^4 / 16)(1 + (2 sin^2 phi - 3) sin^2 theta)(1 + (2 cos^2 phi - 3) sin^2 theta),
    with tr H^4 from det = ((tr H^2)^2 - 2 tr H^4) / 8.
    N=5: tr H^3 only.
    """
    r = p.r
    tr_h2 = r * r
    if p.n == 3:
        (theta,) = p.angles
        det = r**3 * math.cos(3.0 * theta) / (3.0 * SQRT6)
        return AngleInvariants(tr_h2=tr_h2, tr_h3=3.0 * det, tr_h4=tr_h2**2 / 2.0, det=det)

    if p.n == 4:
        theta, phi = p.angles
        s2 = math.sin(theta) ** 2
        tr_h3 = 0.75 * r**3 * math.sin(theta) * math.sin(2.0 * theta) * math.cos(2.0 * phi)
        det = (
            r**4
            / 16.0
            * (1.0 + (2.0 * math.sin(phi) ** 2 - 3.0) * s2)
            * (1.0 + (2.0 * math.cos(phi) ** 2 - 3.0) * s2)
        )
        tr_h4 = (tr_h2**2 - 8.0 * det) / 2.0
        return AngleInvariants(tr_h2=tr_h2, tr_h3=tr_h3, tr_h4=tr_h4, det=det)

    psi, theta, phi = p.angles
    cpsi, spsi = math.cos(psi), math.sin(psi)
    ctheta, stheta = math.cos(theta), math.sin(theta)
    cphi = math.cos(phi)
    tr_h3 = r**3 * (
        3.0 / SQRT5 * cpsi * (0.5 - cpsi**2)
        + 5.0 / (2.0 * SQRT3) * spsi**3 * ctheta * (0.6 - ctheta**2)
        + 2.0 * SQRT2 / SQRT3 * spsi**3 * stheta**3 * cphi * (0.75 - cphi**2)
    )
    return AngleInvariants(tr_h2=tr_h2, tr_h3=tr_h3, tr_h4=None, det=None)


def _checked_cos(value: float, name: str) -> float:
    if abs(value) > 1.0 + ARCCOS_SLACK:
        msg = f"cos({name}) = {value:.15g} lies outside [-1, 1]"
        logger.error(msg)
        raise InconsistentInvariantsError(msg)
    if abs(value) > 1.0:
        logger.warning(f"Clamping cos({name}) = {value:.17g} into [-1, 1]")
    return max(-1.0, min(1.0, value))


def su3_angle_from_invariants(r2: float, det: float) -> float:
    """Invert det H = r^3 cos(3 theta) / (3 sqrt 6) for theta in [0, pi/3].

    Raises:
        InvalidInputError: If r2 <= 0
        InconsistentInvariantsError: If |cos 3 theta| exceeds 1 beyond rounding
    """
    if not r2 > 0:
        msg = f"tr(H^2) must be positive, got {r2}"
        logger.error(msg)
        raise InvalidInputError(msg)

    r = math.sqrt(r2)
    cos3 = _checked_cos(3.0 * SQRT6 * det / r**3, "3 theta")
    return math.acos(cos3) / 3.0


def _su4_residual(u: float, w: float, delta16: float, tau3: float) -> npt.NDArray[np.float64]:
    root = math.sqrt(max(0.0, 1.0 - u))
    return np.array(
        [
            (1.0 - 2.0 * u) ** 2 - (w * u) ** 2 - delta16,
            1.5 * root * u * w - tau3,
        ]
    )


def _su4_jacobian(u: float, w: float) -> npt.NDArray[np.float64]:
    root = math.sqrt(max(1.0 - u, 1e-300))
    return np.array(
        [
            [-4.0 * (1.0 - 2.0 * u) - 2.0 * w * w * u, -2.0 * w * u * u],
            [1.5 * w * (root - u / (2.0 * root)), 1.5 * root * u],
        ]
    )


def _su4_newton(u: float, w: float, delta16: float, tau3: float, max_iter: int = 100) -> Tuple[float, float]:
    residual = _su4_residual(u, w, delta16, tau3)
    for _ in range(max_iter):
        norm = float(np.linalg.norm(residual))
        if norm <= 1e-15:
            break
        step, *_ = np.linalg.lstsq(_su4_jacobian(u, w), -residual, rcond=None)
        damping = 1.0
        while damping > 1e-6:
            u_new = min(1.0, max(0.0, u + damping * step[0]))
            w_new = min(1.0, max(-1.0, w + damping * step[1]))
            trial = _su4_residual(u_new, w_new, delta16, tau3)
            if np.linalg.norm(trial) < norm:
                break
            damping *= 0.5
        else:
            break
        u, w, residual = u_new, w_new, trial
    return u, w


def _power_sum_error(values: npt.NDArray[np.float64], traces: Sequence[float], r: float) -> float:
    return max(abs(float(np.sum(values**p)) - traces[p - 2]) / r**p for p in (2, 3, 4))


def _su4_spectrum(tr_h2: float, tr_h3: float, tr_h4: float) -> npt.NDArray[np.float64]:
    """Real roots of z^4 - (tr H^2 / 2) z^2 - (tr H^3 / 3) z + det, sorted.

    Repeated roots come out of the companion matrix split by about
    eps^(1/k) r. Each such cluster is replaced by its mean when that leaves
    the power sums unchanged to SU4_MERGE_RTOL.

    Raises:
        InconsistentInvariantsError: If the roots are not real
    """
    r = math.sqrt(tr_h2)
    det = (tr_h2**2 - 2.0 * tr_h4) / 8.0
    roots = np.roots([1.0, 0.0, -tr_h2 / 2.0, -tr_h3 / 3.0, det])
    if np.max(np.abs(roots.imag)) > SU4_CLUSTER_RTOL * r:
        msg = (
            f"Invariants (tr H^2, tr H^3, tr H^4) = ({tr_h2}, {tr_h3}, {tr_h4}) "
            "are not realized by any real spectrum"
        )
        logger.error(msg)
        raise InconsistentInvariantsError(msg)

    traces = (tr_h2, tr_h3, tr_h4)
    values = roots.real.copy()
    for group in cluster_spectrum(roots, SU4_CLUSTER_RTOL * r):
        if len(group) < 2:
            continue
        merged = values.copy()
        merged[group] = float(np.mean(roots[group].real))
        if _power_sum_error(merged, traces, r) <= SU4_MERGE_RTOL:
            values = merged
    return np.sort(values)


def _su4_pairings(values: npt.NDArray[np.float64], r: float) -> List[Tuple[float, float]]:
    """(theta, phi) in [0, pi/2]^2 for each split of the spectrum into two pairs.

    The pair with the non-negative sum plays (lambda_3, lambda_4), so its
    sum is r cos(theta); the two pair differences are r sqrt(2) sin(theta)
    times sin(phi) and cos(phi).
    """
    angles = []
    for first in ((0, 1), (0, 2), (0, 3)):
        second = tuple(k for k in range(4) if k not in first)
        p, q = values[list(first)], values[list(second)]
        if p.sum() > q.sum():
            p, q = q, p
        d_p, d_q = abs(p[1] - p[0]), abs(q[1] - q[0])
        theta = math.atan2(math.hypot(d_p, d_q) / SQRT2, float(q.sum()))
        angles.append((theta, math.atan2(d_p, d_q)))
    return angles


def su4_angles_from_invariants(
    tr_h2: float,
    tr_h3: float,
    tr_h4: float,
    rtol: float = 1e-9,
) -> AngleParams:
    """Recover (r, theta, phi) for N=4 from tr(H^2), tr(H^3), tr(H^4).

    With u = sin^2(theta) and w = cos(2 phi) the closed forms become
    (1 - 2u)^2 - w^2 u^2 = 16 det / r^4 and (3/2) sqrt(1 - u) u w = tr(H^3) / r^3.
    These are solved by damped Newton from an 8x8 grid of starts; a root is
    accepted when the forward invariants match to rtol, and the accepted
    root with the smallest u selects the branch. The result is then snapped
    to the nearest exact pairing of the quartic's roots, which fixes the
    square-root loss of accuracy Newton suffers next to a repeated
    eigenvalue. theta and phi land in [0, pi/2].

    Raises:
        InvalidInputError: If tr_h2 <= 0
        InconsistentInvariantsError: If no real spectrum or no accepted root exists
    """
    if not tr_h2 > 0:
        msg = f"tr(H^2) must be positive, got {tr_h2}"
        logger.error(msg)
        raise InvalidInputError(msg)

    values = _su4_spectrum(tr_h2, tr_h3, tr_h4)

    r = math.sqrt(tr_h2)
    det = (tr_h2**2 - 2.0 * tr_h4) / 8.0
    delta16 = 16.0 * det / r**4
    tau3 = tr_h3 / r**3

    best: Optional[Tuple[float, float]] = None
    grid = (np.arange(8) + 0.5) / 8.0
    for u0 in grid:
        for w0 in 2.0 * grid - 1.0:
            u, w = _su4_newton(float(u0), float(w0), delta16, tau3)
            theta = math.asin(math.sqrt(u))
            phi = 0.5 * math.acos(w)
            forward = invariants_from_angles(AngleParams(n=4, r=r, angles=(theta, phi)))
            error = max(abs(forward.tr_h3 - tr_h3) / r**3, abs(forward.tr_h4 - tr_h4) / r**4)
            if error <= rtol and (best is None or u < best[0]):
                best = (u, w)

    pairings = _su4_pairings(values, r)
    if best is None:
        # Newton stalls where the Jacobian is singular (a triple root sits on w = +-1)
        theta, phi = min(pairings, key=lambda pair: pair[0])
    else:
        u, w = best
        theta, phi = min(
            pairings,
            key=lambda pair: math.hypot(math.sin(pair[0]) ** 2 - u, math.cos(2.0 * pair[1]) - w),
        )

    snapped = angles_to_spectrum(AngleParams(n=4, r=r, angles=(theta, phi))).components
    if _power_sum_error(np.sort(snapped), (tr_h2, tr_h3, tr_h4), r) > rtol:
        if best is None:
            msg = f"No angle pair reproduces invariants ({tr_h2}, {tr_h3}, {tr_h4}) within {rtol}"
            logger.error(msg)
            raise InconsistentInvariantsError(msg)
        theta = math.asin(math.sqrt(best[0]))
        phi = 0.5 * math.acos(best[1])
    u = math.sin(theta) ** 2
    gimbal = u <= GIMBAL_RTOL
    if gimbal:
        phi = 0.0
    logger.debug(f"SU(4) angles recovered: theta={theta:.6f}, phi={phi:.6f}")
    return AngleParams(n=4, r=r, angles=(theta, phi), gimbal=gimbal)


def spectrum_to_angles(ev: EigenvalueVector) -> AngleParams:
    """Invert the component formulas, consuming components in their printed order.

    N=3 reads theta from lambda_3 and lambda_2 - lambda_1. N=4 reads theta
    from lambda_1 + lambda_2 and phi from the two differences. N=5 reads psi
    from lambda_1, theta from lambda_2, phi from lambda_3 and the sign of
    sin(phi) from lambda_5 - lambda_4. Undetermined angles are returned as 0
    with gimbal set.

    Raises:
        UnsupportedOrderError: If N is not 3, 4 or 5
        InconsistentInvariantsError: If a cosine argument leaves [-1, 1]
    """
    lam = ev.components
    n = ev.n
    r = ev.r
    if n not in ANGLE_ORDERS:
        msg = f"Angle parameterization exists only for N in {ANGLE_ORDERS}, got {n}"
        logger.error(msg)
        raise UnsupportedOrderError(msg)

    if r == 0.0:
        return AngleParams(n=n, r=0.0, angles=(0.0,) * (n - 2), gimbal=True)

    floor = GIMBAL_RTOL * r
    if n == 3:
        cos_theta = _checked_cos(lam[2] / (math.sqrt(2.0 / 3.0) * r), "theta")
        sin_theta = (lam[1] - lam[0]) / (SQRT2 * r)
        return AngleParams(n=3, r=r, angles=(math.atan2(sin_theta, cos_theta),))

    if n == 4:
        r_cos_theta = -(lam[0] + lam[1])
        _checked_cos(r_cos_theta / r, "theta")
        x = (lam[3] - lam[2]) / SQRT2
        y = (lam[1] - lam[0]) / SQRT2
        r_sin_theta = math.hypot(x, y)
        theta = math.atan2(r_sin_theta, r_cos_theta)
        if r_sin_theta <= floor:
            return AngleParams(n=4, r=r, angles=(theta, 0.0), gimbal=True)
        phi = math.atan2(y, x) % (2.0 * math.pi)
        return AngleParams(n=4, r=r, angles=(theta, phi))

    r_cos_psi = -lam[0] * SQRT5 / 2.0
    _checked_cos(r_cos_psi / r, "psi")
    base = r_cos_psi / (2.0 * SQRT5)
    a_cos_theta = -(lam[1] - base) * 2.0 * SQRT3 / 3.0
    x = (a_cos_theta / (2.0 * SQRT3) - (lam[2] - base)) * SQRT6 / 2.0
    y = (lam[4] - lam[3]) / SQRT2
    a_sin_theta = math.hypot(x, y)
    r_sin_psi = math.hypot(a_cos_theta, a_sin_theta)
    psi = math.atan2(r_sin_psi, r_cos_psi)
    if r_sin_psi <= floor:
        return AngleParams(n=5, r=r, angles=(psi, 0.0, 0.0), gimbal=True)

    theta = math.atan2(a_sin_theta, a_cos_theta)
    if a_sin_theta <= floor:
        return AngleParams(n=5, r=r, angles=(psi, theta, 0.0), gimbal=True)

    phi = math.atan2(y, x) % (2.0 * math.pi)
    return AngleParams(n=5, r=r, angles=(psi, theta, phi))


def _sorted_values(values: Any) -> npt.NDArray[np.complex128]:
    array = np.asarray(values, dtype=np.complex128).ravel()
    return array[np.lexsort((array.imag, array.real))]


def multiset_distance(a: Any, b: Any) -> float:
    """Max-abs difference between two spectra after sorting both."""
    left, right = _sorted_values(a), _sorted_values(b)
    if left.size != right.size:
        msg = f"Cannot compare spectra of sizes {left.size} and {right.size}"
        logger.error(msg)
        raise InvalidInputError(msg)
    return float(np.max(np.abs(left - right))) if left.size else 0.0


def geometry_rows(vs: SimplexVertexSet, axis: Sequence[float]) -> Iterator[List[Any]]:
    """Rows kind, index, x_1..x_N, projection for the vertices and the axis.

    The axis row carries r times the unit axis and no projection.
    """
    projection = project_spectrum(vs, axis).components
    for k, vertex in enumerate(vs.vertices):
        yield ["vertex", k, *(float(x) for x in vertex), float(projection[k])]
    yield ["axis", 0, *(float(vs.r * x) for x in axis), None]


def geometry_header(n: int) -> List[str]:
    """CSV header matching geometry_rows."""
    return ["kind", "index", *(f"x{k}" for k in range(1, n + 1)), "projection"]
