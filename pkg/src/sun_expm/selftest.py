"""Property suites run by `sun-expm selftest` at reduced sample counts."""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from sun_expm.config import DEFAULT_SEED, ORACLE_RTOL, logger
from sun_expm.errors import InvalidInputError, SunExpmError
from sun_expm.ops.expm_poly import (
    exp_coeffs,
    expm_ch,
    expm_oracle,
    resolvent_poly,
    su_explicit,
    su_membership,
    sun_hierarchy_check,
    unit_term,
)
from sun_expm.ops.invariants import generating_function, sym_from_spectrum, sym_from_traces
from sun_expm.ops.matrix_core import determinant, max_norm, trace_powers
from sun_expm.ops.response import response_contour_oracle, response_derivs, spin_response
from sun_expm.ops.simplex_geometry import (
    AngleParams,
    angles_to_spectrum,
    invariants_from_angles,
    multiset_distance,
    project_spectrum,
    simplex_vertices,
    spectrum_to_angles,
    su4_angles_from_invariants,
)
from sun_expm.ops.spectra import Spectrum, char_roots_general, eig_hermitian
from sun_expm.ops.sun_generators import (
    SplitMix64,
    character,
    random_complex_matrix,
    random_traceless_hermitian,
    spin_charpoly_check,
    spin_generator,
    spin_trace_moments,
)

Check = Tuple[str, float, float]
SuiteFunction = Callable[[int, SplitMix64], List[Check]]

SUITES: Dict[str, SuiteFunction] = {}


def suite(name: str) -> Callable[[SuiteFunction], SuiteFunction]:
    """Register a property suite under a name."""

    def register(func: SuiteFunction) -> SuiteFunction:
        SUITES[name] = func
        return func

    return register


@dataclass
class SuiteResult:
    """Outcome of one suite: (check, worst deviation, tolerance) triples."""

    name: str
    checks: List[Check] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c[1] <= c[2]]

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures


def _relative(a, b) -> float:
    scale = max(abs(complex(b)), 1e-300)
    return abs(complex(a) - complex(b)) / scale


def _uniform(rng: SplitMix64, low: float, high: float) -> float:
    return low + (high - low) * rng.next_float()


def _unit_vector(rng: SplitMix64, size: int) -> np.ndarray:
    v = rng.gaussians(size)
    return v / np.linalg.norm(v)


@suite("matrix_core")
def _matrix_core_suite(samples: int, rng: SplitMix64) -> List[Check]:
    cyclic, det_vs_spectrum = 0.0, 0.0
    for _ in range(samples):
        a, b = random_complex_matrix(5, rng), random_complex_matrix(5, rng)
        cyclic = max(cyclic, _relative(np.trace(a @ b), np.trace(b @ a)))
        m = random_complex_matrix(4, rng)
        det_vs_spectrum = max(det_vs_spectrum, _relative(np.prod(char_roots_general(m).values), determinant(m)))
    return [("trace is cyclic", cyclic, 1e-12), ("det equals product of eigenvalues", det_vs_spectrum, 1e-9)]


@suite("spectra")
def _spectra_suite(samples: int, rng: SplitMix64) -> List[Check]:
    trace_sum, agreement = 0.0, 0.0
    for k in range(samples):
        n = 2 + k % 5
        h = random_traceless_hermitian(n, rng)
        spec = eig_hermitian(h)
        frob = float(np.linalg.norm(h.matrix))
        trace_sum = max(trace_sum, abs(np.sum(spec.values)) / frob)
        agreement = max(agreement, multiset_distance(spec.values, char_roots_general(h.matrix).values))
    return [("eigenvalues sum to zero", trace_sum, 1e-10), ("Aberth matches Jacobi", agreement, 1e-7)]


@suite("invariants")
def _invariants_suite(samples: int, rng: SplitMix64) -> List[Check]:
    double, generating = 0.0, 0.0
    for k in range(samples):
        n = 2 + k % 7
        h = random_traceless_hermitian(n, rng)
        from_traces = sym_from_traces(trace_powers(h.matrix, n), n)
        from_spectrum = sym_from_spectrum(eig_hermitian(h))
        scale = max(1.0, float(np.max(np.abs(from_spectrum.s))))
        double = max(double, float(np.max(np.abs(from_traces.s - from_spectrum.s))) / scale)
        t = _uniform(rng, -1.0, 1.0)
        direct = determinant(np.eye(n) + t * np.asarray(h.matrix))
        generating = max(generating, _relative(generating_function(from_traces, t), direct))
    return [("traces agree with spectrum", double, 1e-8), ("generating function identity", generating, 1e-9)]


@suite("response")
def _response_suite(samples: int, rng: SplitMix64) -> List[Check]:
    contour, spin = 0.0, 0.0
    for k in range(samples):
        n = 2 + k % 5
        values = np.sort(rng.gaussians(n))
        values -= values.mean()
        values /= max(1.0, float(np.max(np.abs(values))))
        spec = Spectrum.from_values(values)
        t = _uniform(rng, -2.0, 2.0)
        residue = response_derivs(spec, t, 0).derivs[0]
        contour = max(contour, abs(residue - response_contour_oracle(spec, t)))
    for two_j in range(1, 9):
        j = two_j / 2.0
        theta = _uniform(rng, -math.pi, math.pi)
        ladder = Spectrum.from_values([j - m for m in range(two_j + 1)])
        spin = max(spin, abs(spin_response(j, theta) - response_derivs(ladder, theta, 0).derivs[0]))
    return [("residue sum matches contour", contour, 1e-9), ("spin closed form", spin, 1e-10)]


@suite("expm_poly")
def _expm_poly_suite(samples: int, rng: SplitMix64) -> List[Check]:
    oracle, explicit, unit, unitarity, resolvent, hierarchy = 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for k in range(samples):
        n = 2 + k % 4
        h = random_traceless_hermitian(n, rng)
        t = _uniform(rng, -1.0, 1.0)
        spec = eig_hermitian(h)
        rho = float(np.max(np.abs(spec.values)))
        u = expm_ch(h.matrix, t, spectrum=spec)
        oracle = max(oracle, max_norm(u - expm_oracle(h.matrix, t)) / math.exp(abs(t) * rho))
        explicit = max(explicit, max_norm(su_explicit(h, t) - u))
        invariants = sym_from_spectrum(spec)
        rd = response_derivs(spec, t, n - 1)
        e0 = exp_coeffs(invariants, rd).e[0]
        unit = max(unit, abs(unit_term(invariants, rd) - e0) / max(abs(e0), 1.0))
        unitarity = max(unitarity, su_membership(u)[0])
        s = 0.1 / max(rho, 1.0)
        matrix, _ = resolvent_poly(h.matrix, s)
        resolvent = max(resolvent, max_norm((np.eye(n) - s * np.asarray(h.matrix)) @ matrix - np.eye(n)))
        if n >= 3:
            hierarchy = max(hierarchy, sun_hierarchy_check(h, t).max_deviation)
    return [
        ("expm_ch matches oracle", oracle, ORACLE_RTOL),
        ("explicit forms match expm_ch", explicit, 1e-10),
        ("unit term equals E_0", unit, 1e-12),
        ("unitarity", unitarity, 1e-10),
        ("resolvent identity", resolvent, 1e-10),
        ("rank hierarchy", hierarchy, 1e-12),
    ]


@suite("simplex_geometry")
def _simplex_suite(samples: int, rng: SplitMix64) -> List[Check]:
    gram, projection, formulas, roundtrip, su4 = 0.0, 0.0, 0.0, 0.0, 0.0
    for n in range(2, 13):
        vs = simplex_vertices(n, 1.0)
        expected = np.full((n, n), 1.0 / (1 - n))
        np.fill_diagonal(expected, 1.0)
        gram = max(gram, float(np.max(np.abs(vs.gram() - expected))))
    for k in range(samples):
        n = 3 + k % 3
        h = random_traceless_hermitian(n, rng)
        spec = eig_hermitian(h)
        lam = spec.values.real
        r = float(np.linalg.norm(lam))
        projected = project_spectrum(simplex_vertices(n, r), lam / r).components
        projection = max(projection, multiset_distance(projected, lam))

        angles = [_uniform(rng, 0.05, math.pi - 0.05) for _ in range(n - 2)]
        if n > 3:
            angles[-1] = _uniform(rng, 0.05, 2 * math.pi - 0.05)
        p = AngleParams(n=n, r=_uniform(rng, 0.5, 2.0), angles=tuple(angles))
        ev = angles_to_spectrum(p)
        closed = invariants_from_angles(p)
        formulas = max(formulas, abs(closed.tr_h3 - float(np.sum(ev.components**3))) / p.r**3)
        back = angles_to_spectrum(spectrum_to_angles(ev)).components
        roundtrip = max(roundtrip, float(np.max(np.abs(back - ev.components))) / p.r)
        if n == 4:
            recovered = su4_angles_from_invariants(closed.tr_h2, closed.tr_h3, closed.tr_h4)
            su4 = max(su4, multiset_distance(angles_to_spectrum(recovered).components, ev.components) / p.r)
    return [
        ("simplex Gram relations", gram, 1e-12),
        ("projection reproduces spectrum", projection, 1e-9),
        ("closed-form tr H^3", formulas, 1e-11),
        ("angle roundtrip", roundtrip, 1e-10),
        ("SU(4) inverse reproduces spectrum", su4, 1e-9),
    ]


@suite("sun_generators")
def _generators_suite(samples: int, rng: SplitMix64) -> List[Check]:
    charpoly, casimir, characters = 0.0, 0.0, 0.0
    for two_j in range(0, 9):
        j = two_j / 2.0
        charpoly = max(charpoly, spin_charpoly_check(j).max_deviation)
        moments = spin_trace_moments(j, 1)
        casimir = max(casimir, abs(float(moments[1]) - j * (j + 1) * (2 * j + 1) / 3))
        for _ in range(max(1, samples // 10)):
            generator = spin_generator(j, _unit_vector(rng, 3))
            theta = _uniform(rng, -math.pi, math.pi)
            u = expm_ch(generator.matrix.matrix, theta)
            characters = max(characters, abs(np.trace(u) - character(j, 1j * theta)))
    return [
        ("spin characteristic polynomial", charpoly, 1e-9),
        ("Casimir trace norm", casimir, 1e-10),
        ("trace equals character", characters, 1e-9),
    ]


def run_selftest(
    suites: Optional[Iterable[str]] = None,
    samples: int = 20,
    seed: int = DEFAULT_SEED,
) -> List[SuiteResult]:
    """Run the selected property suites (all by default).

    Raises:
        InvalidInputError: If samples < 1 or a suite name is unknown
    """
    if samples < 1:
        msg = f"samples must be at least 1, got {samples}"
        logger.error(msg)
        raise InvalidInputError(msg)

    names = list(suites) if suites else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        msg = f"Unknown suites {unknown}; available: {sorted(SUITES)}"
        logger.error(msg)
        raise InvalidInputError(msg)

    results = []
    for name in names:
        rng = SplitMix64(seed)
        result = SuiteResult(name=name)
        try:
            result.checks = SUITES[name](samples, rng)
        except SunExpmError as e:
            result.error = f"{type(e).__name__}: {e}"
            logger.error(f"Suite {name} raised {result.error}")
        logger.info(f"Suite {name}: {'pass' if result.passed else 'FAIL'}")
        results.append(result)
    return results


def format_table(results: Iterable[SuiteResult]) -> str:
    """Per-suite pass/fail table with the worst check of each suite."""
    lines = [f"{'suite':<18} {'status':<6} worst check"]
    for result in results:
        status = "pass" if result.passed else "FAIL"
        if result.error:
            detail = result.error
        elif result.checks:
            worst = max(result.checks, key=lambda c: c[1] / c[2] if c[2] else math.inf)
            detail = f"{worst[0]}: {worst[1]:.2e} (tol {worst[2]:.0e})"
        else:
            detail = ""
        lines.append(f"{result.name:<18} {status:<6} {detail}")
    return "\n".join(lines)
