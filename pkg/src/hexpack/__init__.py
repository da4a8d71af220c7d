"""hexpack: hexagonal circle packings modulo Moebius transformations.

Flowers of tangent circles, conformally symmetric packings in closed form,
Doyle spirals, cross-ratio fields on the honeycomb lattice, and the Airy
continuum limit.
"""

from .circles import OrientedCircle, circle_through, intersect_circles
from .errors import HexpackError
from .flower import (Flower, build_flower, common_point, cross_ratios,
                     he_schramm_residuals, is_conformally_symmetric, s_circles,
                     symmetric_flower, symmetric_flower_from_cross_ratios,
                     validate_flower)
from .lattice import (EdgeField, SolutionParams, Window, complete_third,
                      edge_level, hexagon_residual, immersed_window, propagate,
                      reconstruct_field, solution_field)
from .layout import (DoyleParams, PackingLayout, doyle_spiral,
                     field_from_layout, layout_from_field, regular_norm,
                     validate_immersion)
from .airy import (airy, airy_map, discrete_schwarzians, hexgrid_image,
                   normalize_linear_schwarzian, schwarzian_fd)
from .moebius import (INF, ExtComplex, MoebiusMap, cross_ratio, fixed_points,
                      involution_from_pairs, moebius_from_triples, multi_ratio,
                      solve_sixth_point)

__version__ = "0.1.0"

__all__ = [
    "INF", "ExtComplex", "MoebiusMap", "cross_ratio", "multi_ratio",
    "moebius_from_triples", "involution_from_pairs", "fixed_points",
    "solve_sixth_point", "OrientedCircle", "circle_through",
    "intersect_circles", "Flower", "build_flower", "symmetric_flower",
    "symmetric_flower_from_cross_ratios", "cross_ratios",
    "he_schramm_residuals", "s_circles", "common_point",
    "is_conformally_symmetric", "validate_flower", "EdgeField", "Window",
    "SolutionParams", "solution_field", "edge_level", "hexagon_residual",
    "complete_third", "propagate", "reconstruct_field", "immersed_window",
    "PackingLayout", "DoyleParams", "layout_from_field", "doyle_spiral",
    "field_from_layout", "validate_immersion", "regular_norm", "airy",
    "airy_map", "schwarzian_fd", "normalize_linear_schwarzian",
    "discrete_schwarzians", "hexgrid_image", "HexpackError",
]
