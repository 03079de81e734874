"""Exact LP, vertex enumeration and the validity / facet / projection checks."""

from .checks import (
    FacetReport,
    ValidityReport,
    all_vertices,
    binary_patterns,
    check_facet,
    check_projection,
    check_valid,
    polytope_dimension,
)
from .simplex import Infeasible, LPError, Unbounded, lp_maximize
from .vertices import SizeGuardError, VertexSet, enumerate_vertices

__all__ = [
    "FacetReport",
    "ValidityReport",
    "all_vertices",
    "binary_patterns",
    "check_facet",
    "check_projection",
    "check_valid",
    "polytope_dimension",
    "Infeasible",
    "LPError",
    "Unbounded",
    "lp_maximize",
    "SizeGuardError",
    "VertexSet",
    "enumerate_vertices",
]
