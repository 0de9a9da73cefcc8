"""Numerical operations for sun-expm."""

from sun_expm.ops.matrix_core import (
    ComplexMatrix,
    HermitianTraceless,
    as_complex_matrix,
    is_hermitian,
    max_norm,
    power_ladder,
    trace_powers,
    determinant,
)
from sun_expm.ops.spectra import (
    Spectrum,
    eig_hermitian,
    aberth_roots,
    char_roots_general,
    cluster_spectrum,
    spectral_diameter,
    spectrum_of,
)
from sun_expm.ops.invariants import (
    SymmetricInvariants,
    sym_from_spectrum,
    sym_from_traces,
    explicit_low_invariants,
    charpoly_coeffs,
    generating_function,
    invariants_of,
)
from sun_expm.ops.response import (
    ResponseDerivs,
    cprime,
    response_derivs,
    spin_response,
    response_contour_oracle,
)
from sun_expm.ops.expm_poly import (
    ExpPolyCoeffs,
    ResolventCoeffs,
    HierarchyReport,
    exp_coeffs,
    expm_ch,
    expm_oracle,
    resolvent_poly,
    unit_term,
    explicit_coeffs,
    su_explicit,
    sun_hierarchy_check,
    su_membership,
    expm_ch_batch,
    expm_oracle_batch,
    su_explicit_batch,
)
from sun_expm.ops.simplex_geometry import (
    SimplexVertexSet,
    AngleParams,
    EigenvalueVector,
    simplex_vertices,
    project_spectrum,
    angles_to_spectrum,
    invariants_from_angles,
    su3_angle_from_invariants,
    su4_angles_from_invariants,
    spectrum_to_angles,
    multiset_distance,
    geometry_rows,
)
from sun_expm.ops.sun_generators import (
    SpinGenerator,
    SplitMix64,
    spin_generator,
    spin_charpoly_check,
    character,
    character_series,
    spin_trace_moments,
    casimir_polynomial_check,
    random_traceless_hermitian,
    random_traceless_batch,
    random_complex_matrix,
)

__all__ = [
    # Matrix core
    "ComplexMatrix",
    "HermitianTraceless",
    "as_complex_matrix",
    "is_hermitian",
    "max_norm",
    "power_ladder",
    "trace_powers",
    "determinant",

    # Spectra
    "Spectrum",
    "eig_hermitian",
    "aberth_roots",
    "char_roots_general",
    "cluster_spectrum",
    "spectral_diameter",
    "spectrum_of",

    # Symmetric invariants
    "SymmetricInvariants",
    "sym_from_spectrum",
    "sym_from_traces",
    "explicit_low_invariants",
    "charpoly_coeffs",
    "generating_function",
    "invariants_of",

    # Response function
    "ResponseDerivs",
    "cprime",
    "response_derivs",
    "spin_response",
    "response_contour_oracle",

    # Matrix exponential and resolvent
    "ExpPolyCoeffs",
    "ResolventCoeffs",
    "HierarchyReport",
    "exp_coeffs",
    "expm_ch",
    "expm_oracle",
    "resolvent_poly",
    "unit_term",
    "explicit_coeffs",
    "su_explicit",
    "sun_hierarchy_check",
    "su_membership",
    "expm_ch_batch",
    "expm_oracle_batch",
    "su_explicit_batch",

    # Simplex geometry
    "SimplexVertexSet",
    "AngleParams",
    "EigenvalueVector",
    "simplex_vertices",
    "project_spectrum",
    "angles_to_spectrum",
    "invariants_from_angles",
    "su3_angle_from_invariants",
    "su4_angles_from_invariants",
    "spectrum_to_angles",
    "multiset_distance",
    "geometry_rows",

    # Generators
    "SpinGenerator",
    "SplitMix64",
    "spin_generator",
    "spin_charpoly_check",
    "character",
    "character_series",
    "spin_trace_moments",
    "casimir_polynomial_check",
    "random_traceless_hermitian",
    "random_traceless_batch",
    "random_complex_matrix",
]
