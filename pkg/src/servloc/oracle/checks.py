"""Ground-truth checks built on the per-pattern decomposition.

The convex hull of the lifted set is the hull of its finitely many slices
at binary ``y``. So an inequality is valid iff it holds on every slice
(one exact LP per pattern), and the faces of the hull are spanned by the
slice vertices lying on them.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..cuts import LinearInequality
from ..exactmath import affine_rank
from ..formulation import (
    PointXYQ,
    build_lifted,
    fix_binary,
    lift_q,
    max_attraction_region,
    restrict_subsets,
)
from ..instance import IndexSubsets, Instance
from .simplex import lp_maximize
from .vertices import SizeGuardError, enumerate_vertices

MAX_PATTERN_LOCATIONS = 16

FACET = "facet"
LOWER_FACE = "lower face"
EMPTY_FACE = "empty face"
NOT_VALID = "not valid"
WHOLE = "whole polytope"


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    worst_pattern: tuple[int, ...]
    maximizer: PointXYQ
    slack: Fraction  # rhs - max lhs over all patterns
    tight_patterns: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class FacetReport:
    dimension: int
    face_dimension: Optional[int]
    classification: str
    tight_vertices: int = 0


def binary_patterns(n: int) -> list[tuple[int, ...]]:
    """All of ``{0,1}^n`` in counting order: pattern ``k`` has ``y_j`` = bit ``j`` of ``k``."""
    return [tuple((k >> j) & 1 for j in range(n)) for k in range(1 << n)]


def _guard(inst: Instance) -> None:
    if inst.n > MAX_PATTERN_LOCATIONS:
        raise SizeGuardError(f"n = {inst.n} exceeds the pattern guard of {MAX_PATTERN_LOCATIONS}")


def _pattern_excess(args):
    inst, cut, y = args
    sys = fix_binary(build_lifted(inst), y)
    value, point = lp_maximize(sys, cut.coefficient_map)
    return value - cut.rhs, point


def check_valid(inst: Instance, cut: LinearInequality, jobs: int = 1) -> ValidityReport:
    """Maximize ``lhs - rhs`` over every binary slice; valid iff all maxima are <= 0."""
    _guard(inst)
    patterns = binary_patterns(inst.n)
    tasks = [(inst, cut, y) for y in patterns]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pattern_excess, tasks))
    else:
        results = [_pattern_excess(t) for t in tasks]
    worst = None
    for y, (excess, point) in zip(patterns, results):
        if worst is None or excess > worst[0]:
            worst = (excess, y, point)
    excess, y, point = worst
    tight = tuple(p for p, (e, _) in zip(patterns, results) if e == excess)
    return ValidityReport(excess <= 0, y, point, -excess, tight)


def _allowed_patterns(inst: Instance, sub: Optional[IndexSubsets]):
    pats = binary_patterns(inst.n)
    if sub is None:
        return pats
    return [y for y in pats if all(y[j] == 0 for j in range(inst.n) if j not in sub.J)]


@lru_cache(maxsize=4096)
def slice_vertices(inst: Instance, y: tuple[int, ...], sub: Optional[IndexSubsets] = None):
    """Vertices of the lifted slice at ``y`` (restricted to ``sub`` when given)."""
    sys = build_lifted(inst)
    if sub is not None:
        sys = restrict_subsets(sys, sub)
    vs = enumerate_vertices(fix_binary(sys, y))
    return vs.points


def all_vertices(inst: Instance, sub: Optional[IndexSubsets] = None) -> list[PointXYQ]:
    _guard(inst)
    out = []
    for y in _allowed_patterns(inst, sub):
        out.extend(slice_vertices(inst, tuple(y), sub))
    return out


@lru_cache(maxsize=256)
def polytope_dimension(inst: Instance, sub: Optional[IndexSubsets] = None) -> int:
    """Affine dimension of the hull of all slice vertices."""
    pts = all_vertices(inst, sub)
    return affine_rank([p.as_vector() for p in pts]) - 1


def check_facet(inst: Instance, cut: LinearInequality, sub: Optional[IndexSubsets] = None) -> FacetReport:
    """Dimension of the face the cut carves out, by affine rank of its tight vertices."""
    dim = polytope_dimension(inst, sub)
    if not check_valid(inst, cut).valid:
        return FacetReport(dim, None, NOT_VALID)
    tight = [p.as_vector() for p in all_vertices(inst, sub) if cut.lhs(p) == cut.rhs]
    if not tight:
        return FacetReport(dim, -1, EMPTY_FACE)
    face = affine_rank(tight) - 1
    if face == dim:
        cls = WHOLE
    elif face == dim - 1:
        cls = FACET
    else:
        cls = LOWER_FACE
    return FacetReport(dim, face, cls, len(tight))


def check_projection(inst: Instance) -> bool:
    """Projection of each lifted slice onto ``x`` equals the max-attraction slice.

    Both regions are polytopes, so inclusion both ways on vertices suffices:
    lifted vertices project into the region, and every region vertex lifts
    with the argmax assignment of ``q``.
    """
    _guard(inst)
    lifted = build_lifted(inst)
    for y in binary_patterns(inst.n):
        region = max_attraction_region(inst, y)
        for p in slice_vertices(inst, tuple(y)):
            if not region.contains(p.values()):
                return False
        sl = fix_binary(lifted, y)
        q = lift_q(inst, y)
        for p in enumerate_vertices(region):
            cand = PointXYQ(p.x, tuple(Fraction(v) for v in y), q)
            if not sl.contains(cand.values()):
                return False
    return True
