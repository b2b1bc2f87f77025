"""Pants decompositions, their elementary moves, relation cells, and
machine-checkable contraction certificates for loops of moves."""

from .farey import (
    FareyModel,
    FareySubcomplex,
    Slope,
    SlopeModel,
    bounded_subcomplex,
    fan_path,
    is_adjacent,
    triangle_completions,
)
from .homotopy import (
    Certificate,
    fill_finite_loop,
    reduce_farey_loop,
    simply_connected_report,
    verify_certificate,
)
from .pantsgraph import (
    PantsGraph,
    TypeMoveGraph,
    build_move_graph,
    canonical_code,
    complement_type,
    enumerate_types,
    legal_moves,
)
from .relations import (
    RelationInstance,
    RelationKind,
    commute_check,
    find_instances,
    pentagon_instance_0_5,
    validate_instance,
)
from .surface import SurfaceType, curve_count, pants_count, validate_surface

__version__ = "0.1.0"

__all__ = [
    "FareyModel",
    "FareySubcomplex",
    "Slope",
    "SlopeModel",
    "bounded_subcomplex",
    "fan_path",
    "is_adjacent",
    "triangle_completions",
    "Certificate",
    "fill_finite_loop",
    "reduce_farey_loop",
    "simply_connected_report",
    "verify_certificate",
    "PantsGraph",
    "TypeMoveGraph",
    "build_move_graph",
    "canonical_code",
    "complement_type",
    "enumerate_types",
    "legal_moves",
    "RelationInstance",
    "RelationKind",
    "commute_check",
    "find_instances",
    "pentagon_instance_0_5",
    "validate_instance",
    "SurfaceType",
    "curve_count",
    "pants_count",
    "validate_surface",
]
