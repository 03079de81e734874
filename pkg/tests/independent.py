"""Direct re-implementation of the three cut families for cross-checking separation.

Shares nothing with ``servloc.cuts`` except the instance and point types:
every coefficient is recomputed from the closed-form expressions here.
"""

from fractions import Fraction
from itertools import combinations


def _subsets(k):
    for size in range(1, k + 1):
        yield from combinations(range(k), size)


def _mx(values):
    values = list(values)
    return max(values) if values else Fraction(0)


def _violations(inst, point):
    m, n = inst.m, inst.n
    c, d = inst.capacity, inst.demand
    x, y = point.x, point.y
    for I in _subsets(m):
        for J in _subsets(n):
            capJ = sum(c[j] for j in J)
            attJ = sum(_mx(d[i][j] for j in J) for i in I)
            attAll = sum(_mx(d[i]) for i in I)
            outside = [j for j in range(n) if j not in J]
            for jp in outside:
                lhs = sum(x[i][j] for i in I for j in J + (jp,)) - (attAll - capJ) * y[jp]
                yield ("single", I, J, jp), lhs - capJ
            if capJ <= attJ:
                lhs = sum(x[i][j] for i in I for j in range(n))
                for jp in outside:
                    lhs -= (sum(_mx(d[i][j] for j in J + (jp,)) for i in I) - capJ) * y[jp]
                yield ("multi", I, J, None), lhs - capJ
            if len(J) < 2 or not capJ > attJ:
                continue
            if any(_mx(d[i]) != _mx(d[i][j] for j in J) for i in I):
                continue
            critical = True
            for j0 in J:
                rest = [j for j in J if j != j0]
                if not sum(c[j] for j in rest) < sum(_mx(d[i][j] for j in rest) for i in I):
                    critical = False
            if not critical:
                continue
            lhs = sum(x[i][j] for i in I for j in J) + sum((capJ - c[j] - attJ) * y[j] for j in J)
            yield ("facet", I, J, None), lhs - (len(J) - 1) * (capJ - attJ)


def violated(inst, point):
    """``{(family, I, J, jprime): violation}`` for every member cut with positive violation."""
    return {key: v for key, v in _violations(inst, point) if v > 0}


def as_keys(result):
    """The same mapping built from a ``SeparationResult``."""
    out = {}
    for cut, v in result.cuts:
        sub = cut.subsets
        out[(cut.family, sub.I, sub.J, sub.jprime)] = v
    return out
