"""Vertex enumeration by the double-description method.

The polytope ``{v >= 0 : rows}`` is homogenized to the cone
``{(t, v) >= 0 : rhs * t - a . v >= 0}`` (``= 0`` for equalities). The
starting cone is the nonnegative orthant, whose extreme rays are the unit
vectors, and rows are intersected one at a time. Two rays are combined
only when adjacent, tested combinatorially on their sets of tight
constraints. Rays stay primitive integer vectors; vertices are the rays
with ``t > 0`` rescaled to ``t = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..exactmath import integer_row, primitive
from ..formulation import EQ, ConstraintSystem, PointXYQ
from .presolve import presolve

MAX_FREE_VARIABLES = 24


class SizeGuardError(ValueError):
    pass


@dataclass(frozen=True)
class VertexSet:
    """Vertices of one system, sorted lexicographically by coordinates."""

    points: tuple[PointXYQ, ...]
    pattern: Optional[tuple[int, ...]] = None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [p.as_vector() for p in self.points]


def _dd(dim: int, constraints: list[tuple[list[int], bool]]) -> list[tuple[int, ...]]:
    """Extreme rays of ``{r in R^dim : r >= 0, c . r >= 0 (or == 0)}``."""
    nbits = dim
    rays = []
    full = (1 << dim) - 1
    for k in range(dim):
        vec = [0] * dim
        vec[k] = 1
        rays.append((tuple(vec), full & ~(1 << k)))
    need = dim - 2
    for h, (coef, is_eq) in enumerate(constraints):
        bit = 1 << (nbits + h)
        pos, zero, neg = [], [], []
        for vec, zmask in rays:
            val = 0
            for a, x in zip(coef, vec):
                if a and x:
                    val += a * x
            if val > 0:
                pos.append((vec, zmask, val))
            elif val < 0:
                neg.append((vec, zmask, val))
            else:
                zero.append((vec, zmask | bit))
        if not neg and not (is_eq and pos):
            rays = [(v, z) for v, z, _ in pos] + zero
            continue
        masks = [z for _, z in rays]
        new = []
        for pv, pz, pval in pos:
            for nv, nz, nval in neg:
                common = pz & nz
                if common.bit_count() < need:
                    continue
                adjacent = True
                for z in masks:
                    if z != pz and z != nz and (common & z) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = [pval * b - nval * a for a, b in zip(pv, nv)]
                new.append((primitive(comb), common | bit))
        kept = zero + new
        if not is_eq:
            kept = [(v, z) for v, z, _ in pos] + kept
        rays = kept
    return [v for v, _ in rays]


def enumerate_vertices(sys: ConstraintSystem, max_free: int = MAX_FREE_VARIABLES) -> VertexSet:
    """All vertices of a bounded system without binary markers."""
    if sys.binary:
        raise ValueError("enumerate_vertices needs a system without binary markers")
    red = presolve(sys)
    if red.infeasible:
        return VertexSet(())
    free = red.free
    d = len(free)
    if d > max_free:
        raise SizeGuardError(f"{d} free variables exceed the vertex-enumeration guard of {max_free}")
    index = {v: k + 1 for k, v in enumerate(free)}
    cons: list[tuple[list[int], bool]] = []
    for r in red.rows:
        dense = [Fraction(0)] * (d + 1)
        dense[0] = r.rhs
        for v, a in r.coeffs:
            dense[index[v]] = -a
        cons.append((integer_row(dense), r.rel == EQ))
    # equalities first: they cut the dimension before rays multiply
    cons.sort(key=lambda c: not c[1])
    rays = _dd(d + 1, cons)
    points = []
    for vec in rays:
        t = vec[0]
        if t == 0:
            if any(vec):
                raise ValueError("system is unbounded: recession direction found")
            continue
        assign = {v: Fraction(vec[index[v]], t) for v in free}
        points.append(sys.point(assign))
    points.sort(key=lambda p: p.as_vector())
    return VertexSet(tuple(points))
