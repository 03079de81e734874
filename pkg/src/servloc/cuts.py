"""The three inequality families and their applicability conditions.

All families live in ``(x, y)`` space (no ``q`` terms), so each cut for the
lifted polytope is also a cut for the original max-attraction set.

Empty-set conventions: a sum over ``{}`` is 0 and a max over ``{}`` is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exactmath import INCONSISTENT, UNDERDETERMINED, solve_linear
from .formulation import PointXYQ, VariableId, xvar, yvar
from .instance import IndexSubsets, Instance

SINGLE = "single"
MULTI = "multi"
FACET = "facet"
FAMILIES = (FACET, MULTI, SINGLE)  # strongest first; also the tie-break order
FAMILY_RANK = {f: k for k, f in enumerate(FAMILIES)}


class ConditionNotMet(ValueError):
    """A family's hypothesis fails; carries both exact sides of the comparison."""

    def __init__(self, condition: str, left: Fraction, right: Fraction, relation: str):
        super().__init__(f"condition '{condition}' not met: {left} {relation} {right} is false")
        self.condition = condition
        self.left = left
        self.right = right
        self.relation = relation


class UnderdeterminedSystem(ValueError):
    pass


@dataclass(frozen=True)
class LinearInequality:
    """``sum coeffs . v <= rhs`` with mandatory provenance."""

    coeffs: tuple[tuple[VariableId, Fraction], ...]
    rhs: Fraction
    family: Optional[str] = None
    subsets: Optional[IndexSubsets] = None

    @classmethod
    def build(cls, coeffs: Mapping[VariableId, Fraction], rhs, family=None, subsets=None) -> "LinearInequality":
        merged = {v: Fraction(a) for v, a in coeffs.items() if a != 0}
        items = tuple(sorted(merged.items(), key=lambda t: t[0].sort_key()))
        return cls(items, Fraction(rhs), family, subsets)

    @property
    def coefficient_map(self) -> dict[VariableId, Fraction]:
        return dict(self.coeffs)

    def lhs(self, point) -> Fraction:
        if isinstance(point, PointXYQ):
            return sum((a * point[v] for v, a in self.coeffs), Fraction(0))
        return sum((a * Fraction(point.get(v, 0)) for v, a in self.coeffs), Fraction(0))

    def violation(self, point) -> Fraction:
        """``lhs - rhs``; positive means the point is cut off."""
        return self.lhs(point) - self.rhs

    def coefficient(self, v: VariableId) -> Fraction:
        return self.coefficient_map.get(v, Fraction(0))

    def sort_key(self):
        sub = self.subsets
        prov = (sub.I, sub.J, -1 if sub.jprime is None else sub.jprime) if sub else ((), (), -1)
        return (FAMILY_RANK.get(self.family, len(FAMILIES)),) + prov

    def describe(self) -> str:
        terms = []
        for v, a in self.coeffs:
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            terms.append(f"{sign} {'' if mag == 1 else str(mag) + '*'}{v}")
        text = " ".join(terms).lstrip("+ ") or "0"
        return f"{text} <= {self.rhs}"


def _max(values) -> Fraction:
    values = list(values)
    return max(values) if values else Fraction(0)


def _sum_max(inst: Instance, I: Sequence[int], locations: Sequence[int]) -> Fraction:
    return sum((_max(inst.demand[i][j] for j in locations) for i in I), Fraction(0))


def _cap(inst: Instance, locations: Sequence[int]) -> Fraction:
    return sum((inst.capacity[j] for j in locations), Fraction(0))


def single_location_cut(inst: Instance, I: Sequence[int], J: Sequence[int], jprime: int) -> LinearInequality:
    """Aggregated capacity of ``J`` plus one extra location ``j'``.

    The coefficient of ``y_j'`` is ``-(sum_I max_[n] d_ij - sum_J c_j)``
    and may have either sign.
    """
    sub = IndexSubsets(tuple(I), tuple(J), jprime)
    sub.check(inst)
    if len(sub.J) == inst.n:
        raise ValueError("J must be a proper subset of the locations")
    cap = _cap(inst, sub.J)
    coeffs: dict[VariableId, Fraction] = {}
    for i in sub.I:
        for j in sub.J + (jprime,):
            coeffs[xvar(i, j)] = Fraction(1)
    coeffs[yvar(jprime)] = -(_sum_max(inst, sub.I, range(inst.n)) - cap)
    return LinearInequality.build(coeffs, cap, SINGLE, sub)


def multi_location_hypothesis(inst: Instance, I: Sequence[int], J: Sequence[int]) -> tuple[bool, Fraction, Fraction]:
    left = _cap(inst, J)
    right = _sum_max(inst, I, J)
    return left <= right, left, right


def multi_location_cut(inst: Instance, I: Sequence[int], J: Sequence[int]) -> LinearInequality:
    """Every location outside ``J`` gets its own ``y`` term; needs ``sum_J c <= sum_I max_J d``."""
    sub = IndexSubsets(tuple(I), tuple(J))
    sub.check(inst)
    ok, left, right = multi_location_hypothesis(inst, sub.I, sub.J)
    if not ok:
        raise ConditionNotMet("capacity of J within attraction of J", left, right, "<=")
    cap = left
    coeffs: dict[VariableId, Fraction] = {}
    for i in sub.I:
        for j in range(inst.n):
            coeffs[xvar(i, j)] = Fraction(1)
    for jp in range(inst.n):
        if jp in sub.J:
            continue
        coeffs[yvar(jp)] = -(_sum_max(inst, sub.I, sub.J + (jp,)) - cap)
    return LinearInequality.build(coeffs, cap, MULTI, sub)


@dataclass(frozen=True)
class Comparison:
    holds: bool
    left: Fraction
    right: Fraction
    relation: str
    label: str = ""

    def to_dict(self):
        from .exactmath import format_rational

        return {
            "label": self.label,
            "holds": self.holds,
            "left": format_rational(self.left),
            "relation": self.relation,
            "right": format_rational(self.right),
        }


@dataclass(frozen=True)
class ConditionReport:
    surplus: Comparison
    dominance: tuple[Comparison, ...]
    criticality: tuple[Comparison, ...]

    @property
    def all_hold(self) -> bool:
        return self.surplus.holds and all(c.holds for c in self.dominance) and all(c.holds for c in self.criticality)

    def first_failure(self) -> Optional[Comparison]:
        for c in (self.surplus,) + self.dominance + self.criticality:
            if not c.holds:
                return c
        return None

    def to_dict(self):
        return {
            "all_hold": self.all_hold,
            "surplus": self.surplus.to_dict(),
            "dominance": [c.to_dict() for c in self.dominance],
            "criticality": [c.to_dict() for c in self.criticality],
        }


def facet_conditions(inst: Instance, I: Sequence[int], J: Sequence[int]) -> ConditionReport:
    """Evaluate surplus, dominance and criticality for the pair ``(I, J)``."""
    sub = IndexSubsets(tuple(I), tuple(J))
    sub.check(inst)
    I, J = sub.I, sub.J
    cap, att = _cap(inst, J), _sum_max(inst, I, J)
    surplus = Comparison(cap > att, cap, att, ">", "surplus")
    dominance = []
    for i in I:
        full = _max(inst.demand[i])
        inside = _max(inst.demand[i][j] for j in J)
        dominance.append(Comparison(full == inside, full, inside, "=", f"dominance i={i + 1}"))
    critical = []
    for j0 in J:
        rest = tuple(j for j in J if j != j0)
        left, right = _cap(inst, rest), _sum_max(inst, I, rest)
        critical.append(Comparison(left < right, left, right, "<", f"criticality j0={j0 + 1}"))
    return ConditionReport(surplus, tuple(dominance), tuple(critical))


def critical_facet_coefficients(inst: Instance, I: Sequence[int], J: Sequence[int]) -> tuple[dict[int, Fraction], Fraction]:
    """Closed-form ``y`` coefficients ``a_j`` and right-hand side ``b``."""
    I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
    att = _sum_max(inst, I, J)
    total = _cap(inst, J)
    a = {j: total - inst.capacity[j] - att for j in J}
    b = (len(J) - 1) * (total - att)
    return a, b


def critical_facet_cut(inst: Instance, I: Sequence[int], J: Sequence[int]) -> LinearInequality:
    report = facet_conditions(inst, I, J)
    failed = report.first_failure()
    if failed is not None:
        raise ConditionNotMet(failed.label, failed.left, failed.right, failed.relation)
    sub = IndexSubsets(tuple(I), tuple(J))
    a, b = critical_facet_coefficients(inst, sub.I, sub.J)
    coeffs: dict[VariableId, Fraction] = {}
    for i in sub.I:
        for j in sub.J:
            coeffs[xvar(i, j)] = Fraction(1)
    for j in sub.J:
        coeffs[yvar(j)] = a[j]
    return LinearInequality.build(coeffs, b, FACET, sub)


def solve_cut_coefficients(inst: Instance, I: Sequence[int], J: Sequence[int]) -> tuple[dict[int, Fraction], Fraction]:
    """Recover ``a_j`` and ``b`` from the two binding regimes by a linear solve.

    Unknowns are ordered ``(a_j for j in J) + (b,)``. One equation has all of
    ``J`` open (attraction binds); one per ``j`` has ``J - {j}`` open
    (capacity binds).
    """
    sub = IndexSubsets(tuple(I), tuple(J))
    sub.check(inst)
    I, J = sub.I, sub.J
    if len(J) < 2:
        raise UnderdeterminedSystem("system underdetermined: the facet family needs |J| >= 2")
    k = len(J)
    A: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    A.append([Fraction(1)] * k + [Fraction(-1)])
    rhs.append(-_sum_max(inst, I, J))
    for j in J:
        A.append([Fraction(0 if jj == j else 1) for jj in J] + [Fraction(-1)])
        rhs.append(-_cap(inst, [jj for jj in J if jj != j]))
    sol = solve_linear(A, rhs)
    if sol in (INCONSISTENT, UNDERDETERMINED):
        raise UnderdeterminedSystem(f"coefficient system is {sol}")
    return {j: sol[t] for t, j in enumerate(J)}, sol[-1]


def all_subsets(k: int):
    """Nonempty subsets of ``range(k)`` as sorted tuples, by size then lexicographically."""
    from itertools import combinations

    for size in range(1, k + 1):
        yield from combinations(range(k), size)


def generate_family_cuts(inst: Instance, I: Sequence[int], J: Sequence[int], families=FAMILIES) -> list[LinearInequality]:
    """Every cut the enabled families produce for ``(I, J)`` (all ``j'`` for the single family)."""
    I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
    out = []
    if FACET in families and len(J) >= 2 and facet_conditions(inst, I, J).all_hold:
        out.append(critical_facet_cut(inst, I, J))
    if MULTI in families and multi_location_hypothesis(inst, I, J)[0]:
        out.append(multi_location_cut(inst, I, J))
    if SINGLE in families and len(J) < inst.n:
        for jp in range(inst.n):
            if jp not in J:
                out.append(single_location_cut(inst, I, J, jp))
    return out


def all_family_cuts(inst: Instance, families=FAMILIES) -> list[LinearInequality]:
    """Every admissible cut of the enabled families, in provenance order."""
    cuts = []
    for I in all_subsets(inst.m):
        for J in all_subsets(inst.n):
            cuts.extend(generate_family_cuts(inst, I, J, families))
    cuts.sort(key=LinearInequality.sort_key)
    return cuts
