"""Exact octahedron relation, Y-systems, pentagram maps and wall theorems."""

from .algebra import (
    LaurentPolynomial,
    LaurentRatio,
    laurent_div_exact,
    laurent_is_positive,
    ring_arith,
)
from .lattice import (
    InitialSurface,
    TField,
    YField,
    b_matrix_entry,
    cluster_mutation,
    evolve_to,
    octahedron_step,
    y_from_t,
    y_step,
)
from .network import build_diamond, path_matrix, t_via_network
from .boundary import (
    check_zamolodchikov,
    evolve_strip,
    evolve_tube,
    verify_mirror,
    verify_wall_zeros,
)
from .condensation import (
    build_window_matrix,
    dodgson_determinant,
    recursion_coefficients,
    verify_coefficient_identity,
    verify_direction_independence,
    verify_lift_recursion,
)
from .pentagram import (
    PQCoordinates,
    ProjectivePoint,
    TwistedPolygon,
    YSeed,
    conserved_quantities,
    corner_invariants,
    cross_ratio,
    glick_quiver,
    higher_map,
    kappa_params,
    mutate_y_seed,
    pentagram_map_geometric,
    pentagram_via_mutations,
    pq_invariants,
)
from .torus import (
    QuasiPeriodicSurface,
    TorusWrap,
    build_quasi_surface,
    check_double_periodicity,
    pq_to_torus_y,
    torus_y_evolve,
    verify_unfolding,
)

__all__ = [
    "LaurentPolynomial",
    "LaurentRatio",
    "laurent_div_exact",
    "laurent_is_positive",
    "ring_arith",
    "InitialSurface",
    "TField",
    "YField",
    "b_matrix_entry",
    "cluster_mutation",
    "evolve_to",
    "octahedron_step",
    "y_from_t",
    "y_step",
    "check_zamolodchikov",
    "evolve_strip",
    "evolve_tube",
    "verify_mirror",
    "verify_wall_zeros",
    "build_window_matrix",
    "dodgson_determinant",
    "recursion_coefficients",
    "verify_coefficient_identity",
    "verify_direction_independence",
    "verify_lift_recursion",
    "PQCoordinates",
    "ProjectivePoint",
    "TwistedPolygon",
    "YSeed",
    "conserved_quantities",
    "corner_invariants",
    "cross_ratio",
    "glick_quiver",
    "higher_map",
    "kappa_params",
    "mutate_y_seed",
    "pentagram_map_geometric",
    "pentagram_via_mutations",
    "pq_invariants",
    "QuasiPeriodicSurface",
    "TorusWrap",
    "build_quasi_surface",
    "check_double_periodicity",
    "pq_to_torus_y",
    "torus_y_evolve",
    "verify_unfolding",
    "build_diamond",
    "path_matrix",
    "t_via_network",
]

__version__ = "0.1.0"
