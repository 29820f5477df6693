"""Topologies, explicit representatives and energy bounds for nematic director
fields with tangent boundary conditions in a rectangular prism."""

from .bounds import (
    BoundsReport,
    bound_ratio,
    bounds_report,
    lower_bound_new,
    lower_bound_old,
    upper_bound_formula,
)
from .errors import *  # noqa: F401,F403
from .quadrature import (
    PrismGeometry,
    QuadratureConfig,
    boundary_radius,
    energy,
    inverse_stereographic,
    stereographic,
    trapped_area,
    unoriented_area,
)
from .representative import (
    Configuration,
    GlueData,
    RationalSpec,
    build_anticonformal,
    build_conformal,
    build_nonconformal,
    build_representative,
    config_invariants,
    director,
    evaluate,
    mobius_r,
    mobius_r_inv,
    random_spec,
    spec_invariants,
)
from .topology import (
    Classification,
    Kind,
    KinkTriple,
    SignTriple,
    VertexTopology,
    check_sum_rules,
    classify,
    conjugate_topology,
    extend_to_prism,
    is_realizable,
    omega_chi,
    rotate_topology,
    sweep_topologies,
    wrapping_numbers,
)
from .verify import (
    VerificationReport,
    check_tangent_bc,
    measure_edge_signs,
    measure_kink_numbers,
    measure_trapped_area,
    verify,
)

__version__ = "0.1.0"
