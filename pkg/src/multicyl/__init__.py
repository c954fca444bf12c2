"""Combinatorics of crossing curve families on surfaces, and the flat
geometry they generate."""

from .angles import (
    AngleOrder,
    Feasible,
    NotPairwiseCoherent,
    SignMatrix,
    angle_feasible,
    angle_order_holds,
    necessary_filter,
)
from .coherence import (
    Infeasible,
    ParallelVerdict,
    Separation,
    StarWitness,
    check_parallel_realizable,
    check_star,
    coherently_orientable,
    infeasible_certificate_holds,
    pair_coherent,
    pairwise_coherent,
    star_witness_holds,
)
from .curves import (
    LEFT,
    RIGHT,
    ConfigError,
    Crossing,
    Curve,
    CurveConfiguration,
    Region,
    SegmentSide,
    ValidationReport,
    Violation,
    algebraic_intersection,
    apply_orientation,
    complement_components,
    config_from_doc,
    config_to_doc,
    curve_algebraic_intersection,
    curve_geometric_intersection,
    dumps_config,
    flip_curves,
    from_itineraries_all_disks,
    geometric_intersection,
    identity_orientation,
    loads_config,
    separates,
    trace_boundary_circles,
    validate,
)
from .extension import (
    BridgeObstruction,
    Obstruction,
    SurgeryStep,
    component_digraph,
    extend_pair,
    extend_to_filling,
    remove_singletons,
    replay_steps,
    robbins_orient,
    singleton_set,
)
from .flatsurf import (
    DEFAULT_TRACE_BUDGET,
    CylinderCert,
    FlatConnection,
    FlatCylinder,
    FlatError,
    FlatSurface,
    Graft,
    GraftFound,
    GraftInconclusive,
    MultigraftResult,
    MultigraftStep,
    NotPeriodic,
    Periodic,
    SaddlePath,
    SaddleSegment,
    VertexClass,
    cone_orders,
    cone_points,
    decompose_direction,
    find_graft_t,
    genus,
    graft,
    holonomy,
    local_geodesic_check,
    multigraft,
    path_is_embedded,
    require_valid_surface,
    trace_path,
    validate_surface,
    verify_cylinder_cert,
    vertex_classes,
)
from .origami import (
    HORIZONTAL,
    VERTICAL,
    Cylinder,
    HalfTranslationFlag,
    Origami,
    StratumSignature,
    check_origami,
    cylinder_decomposition,
    dumps_origami,
    loads_origami,
    origami_from_doc,
    origami_to_doc,
    stratum,
    thurston_veech,
    to_flat_surface,
)

__all__ = [
    "DEFAULT_TRACE_BUDGET",
    "HORIZONTAL",
    "LEFT",
    "RIGHT",
    "VERTICAL",
    "AngleOrder",
    "BridgeObstruction",
    "ConfigError",
    "Crossing",
    "Curve",
    "CurveConfiguration",
    "Cylinder",
    "CylinderCert",
    "Feasible",
    "FlatConnection",
    "FlatCylinder",
    "FlatError",
    "FlatSurface",
    "Graft",
    "GraftFound",
    "GraftInconclusive",
    "HalfTranslationFlag",
    "Infeasible",
    "MultigraftResult",
    "MultigraftStep",
    "NotPairwiseCoherent",
    "NotPeriodic",
    "Obstruction",
    "Origami",
    "ParallelVerdict",
    "Periodic",
    "Region",
    "SaddlePath",
    "SaddleSegment",
    "SegmentSide",
    "Separation",
    "SignMatrix",
    "StarWitness",
    "StratumSignature",
    "SurgeryStep",
    "ValidationReport",
    "VertexClass",
    "Violation",
    "algebraic_intersection",
    "angle_feasible",
    "angle_order_holds",
    "apply_orientation",
    "check_origami",
    "check_parallel_realizable",
    "check_star",
    "coherently_orientable",
    "complement_components",
    "component_digraph",
    "cone_orders",
    "cone_points",
    "config_from_doc",
    "config_to_doc",
    "curve_algebraic_intersection",
    "curve_geometric_intersection",
    "cylinder_decomposition",
    "decompose_direction",
    "dumps_config",
    "dumps_origami",
    "extend_pair",
    "extend_to_filling",
    "find_graft_t",
    "flip_curves",
    "from_itineraries_all_disks",
    "genus",
    "geometric_intersection",
    "graft",
    "holonomy",
    "identity_orientation",
    "infeasible_certificate_holds",
    "loads_config",
    "loads_origami",
    "local_geodesic_check",
    "multigraft",
    "necessary_filter",
    "origami_from_doc",
    "origami_to_doc",
    "pair_coherent",
    "pairwise_coherent",
    "path_is_embedded",
    "remove_singletons",
    "replay_steps",
    "require_valid_surface",
    "robbins_orient",
    "separates",
    "singleton_set",
    "star_witness_holds",
    "stratum",
    "thurston_veech",
    "to_flat_surface",
    "trace_boundary_circles",
    "trace_path",
    "validate",
    "validate_surface",
    "verify_cylinder_cert",
    "vertex_classes",
]
