"""Curve models, the group law, point counting and search, and rational map chains."""
from .group import (
    count_weierstrass_mod_p,
    group_law,
    integral_model,
    integral_points_via_generator,
    scalar_mul,
    torsion,
    torsion_bound,
)
from .maps import MapExceptionError, MapStep, RationalMapChain, apply_map_chain, invert_map_chain
from .models import (
    INFINITY,
    CurvePoint,
    EvenModel,
    TwistedModel,
    Weierstrass,
    on_model,
    parse_curve,
    parse_point,
)
from .named import CHAINS, NAMED, curve, invert_E2_chain, known_points
from .points import BadReductionError, count_points_mod_p, quadratic_twist, rational_point_search

__all__ = [
    "BadReductionError",
    "CHAINS",
    "CurvePoint",
    "EvenModel",
    "INFINITY",
    "MapExceptionError",
    "MapStep",
    "NAMED",
    "RationalMapChain",
    "TwistedModel",
    "Weierstrass",
    "apply_map_chain",
    "count_points_mod_p",
    "count_weierstrass_mod_p",
    "curve",
    "group_law",
    "integral_model",
    "integral_points_via_generator",
    "invert_E2_chain",
    "invert_map_chain",
    "known_points",
    "on_model",
    "parse_curve",
    "parse_point",
    "quadratic_twist",
    "rational_point_search",
    "scalar_mul",
    "torsion",
    "torsion_bound",
]
