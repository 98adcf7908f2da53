"""Certified universal lower bounds for squeezing functions.

The package builds the linear normal form of a bounded convex or C-convex
domain around an interior point, composes it with coordinatewise disc maps,
and reports certified universal squeezing bounds next to empirical witness
bounds for the concrete domain.
"""

from .bounds import (
    BoundReport,
    MarginReport,
    ShapeDescriptor,
    WitnessMap,
    ball_shape,
    certify,
    containment_check,
    inscribed_radius_estimate,
    match_projection,
    polydisc_shape,
    report_to_json,
    simplex_shape,
    witness_eval,
)
from .domains import (
    DomainSpec,
    affine_image,
    ball,
    boundary_residual,
    contains,
    convexity_spot_check,
    defining_domain,
    domain_from_json,
    domain_to_json,
    forward_map,
    interior_samples,
    l1ball,
    lp_ball,
    polydisc,
    projective_image,
    ray_exit,
    ray_exit_batch,
    tangent_functional,
    translate,
)
from .errors import (
    AlphaBoundError,
    ArgumentError,
    ClassMismatchError,
    DomainFormatError,
    FrameDegenerateError,
    MapDomainError,
    NonsmoothBoundaryError,
    PipelineInconsistencyError,
    RankDeficiencyError,
    RayCapError,
    SqueezeCertError,
    TriangularityError,
    UnsupportedShapeError,
    ValidationFailureError,
)
from .frame import (
    ContactFrame,
    Normalizer,
    build_frame,
    build_normalizer,
    frame_to_json,
    min_boundary_point,
    normalizer_to_json,
)
from .numerics import (
    ABS_TOL,
    CMatrix,
    UniversalConstants,
    c_const,
    constants_csv,
    constants_table,
    count_inverse_monomials,
    expand_inverse_monomials,
    inverse_coefficients,
    orthonormal_complement,
    rho,
    solve_unit_lower,
    tau,
    unit_lower,
    universal_bounds,
)
from .planar import (
    ContainmentReport,
    PlanarShape,
    RiemannMap,
    affine_shape,
    cayley,
    cayley_inverse,
    disc_shape,
    half_plane,
    koebe_bound,
    rho_radius_check,
    riemann_catalog,
    slit_plane,
    tau_radius_check,
    unit_disc,
)
from .verify import (
    KAPPA_FAMILIES,
    KappaProbeReport,
    SuiteReport,
    default_strictness_fixtures,
    kappa_probe,
    suite_lemmas,
    suite_star,
    suite_strictness,
)

__version__ = "0.1.0"

__all__ = [
    "ABS_TOL",
    "AlphaBoundError",
    "ArgumentError",
    "BoundReport",
    "CMatrix",
    "ClassMismatchError",
    "ContactFrame",
    "ContainmentReport",
    "DomainFormatError",
    "DomainSpec",
    "FrameDegenerateError",
    "KAPPA_FAMILIES",
    "KappaProbeReport",
    "MapDomainError",
    "MarginReport",
    "NonsmoothBoundaryError",
    "Normalizer",
    "PipelineInconsistencyError",
    "PlanarShape",
    "RankDeficiencyError",
    "RayCapError",
    "RiemannMap",
    "ShapeDescriptor",
    "SqueezeCertError",
    "SuiteReport",
    "TriangularityError",
    "UniversalConstants",
    "UnsupportedShapeError",
    "ValidationFailureError",
    "WitnessMap",
    "affine_image",
    "affine_shape",
    "ball",
    "ball_shape",
    "boundary_residual",
    "build_frame",
    "build_normalizer",
    "c_const",
    "cayley",
    "cayley_inverse",
    "certify",
    "constants_csv",
    "constants_table",
    "containment_check",
    "contains",
    "convexity_spot_check",
    "count_inverse_monomials",
    "default_strictness_fixtures",
    "defining_domain",
    "disc_shape",
    "domain_from_json",
    "domain_to_json",
    "expand_inverse_monomials",
    "forward_map",
    "frame_to_json",
    "half_plane",
    "inscribed_radius_estimate",
    "interior_samples",
    "inverse_coefficients",
    "kappa_probe",
    "koebe_bound",
    "l1ball",
    "lp_ball",
    "match_projection",
    "min_boundary_point",
    "normalizer_to_json",
    "orthonormal_complement",
    "polydisc",
    "polydisc_shape",
    "projective_image",
    "ray_exit",
    "ray_exit_batch",
    "report_to_json",
    "rho",
    "rho_radius_check",
    "riemann_catalog",
    "simplex_shape",
    "slit_plane",
    "solve_unit_lower",
    "suite_lemmas",
    "suite_star",
    "suite_strictness",
    "tangent_functional",
    "tau",
    "tau_radius_check",
    "translate",
    "unit_disc",
    "unit_lower",
    "universal_bounds",
    "witness_eval",
    "__version__",
]
