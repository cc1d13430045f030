"""Billiards within confocal quadrics, double reflection nets, and
tangent-hyperplane / touching-point maps on the edge-midpoint honeycomb."""

from .confocal import ConfocalFamily, ConfocalRoot
from .billiards import (CausticSet, LineIntersection, ReflectionEvent,
                        intersect, line_caustics, reflect, trajectory)
from .drnet import DRConfig, DRNet, build_net, double_reflection, verify_net
from .errors import (ConfigError, ConstructionError, GeometryError,
                     NoIntersectionError, TangencyError)
from .hyperlattice import (HoneycombCell, HPMaps, MidVertex, complete_square,
                           enumerate_lattice, extract_maps, star_from_seed,
                           verify_cross_polytope, verify_cuboctahedron,
                           verify_square_face)
from .projective import (DualHyperplane, HomPoint, ProjLine,
                         collinearity_residual, cross_ratio_collinear,
                         cross_ratio_pencil, direction_angle, line_separation,
                         pencil_residual)
from .scene import SceneConfig, parse_config
from .tolerances import TOL_CAUSTIC, TOL_CR, TOL_FORWARD, TOL_RANK, Tolerances

__all__ = [
    "ConfocalFamily", "ConfocalRoot", "CausticSet", "LineIntersection",
    "ReflectionEvent", "intersect", "line_caustics", "reflect", "trajectory",
    "DRConfig", "DRNet", "build_net", "double_reflection", "verify_net",
    "ConfigError", "ConstructionError", "GeometryError", "NoIntersectionError",
    "TangencyError", "HoneycombCell", "HPMaps", "MidVertex", "complete_square",
    "enumerate_lattice", "extract_maps", "star_from_seed",
    "verify_cross_polytope", "verify_cuboctahedron", "verify_square_face",
    "DualHyperplane", "HomPoint", "ProjLine", "collinearity_residual",
    "cross_ratio_collinear", "cross_ratio_pencil", "direction_angle",
    "line_separation", "pencil_residual", "SceneConfig", "parse_config",
    "TOL_CAUSTIC", "TOL_CR", "TOL_FORWARD", "TOL_RANK", "Tolerances",
]

__version__ = "0.1.0"
