"""Exact branch-and-bound with a family-cut loop at every node.

The objective is revenue from served demand minus opening costs. Bounds
and optima are Fractions throughout; there is no tolerance anywhere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .cuts import FACET, FAMILIES, LinearInequality
from .formulation import LE, ConstraintSystem, PointXYQ, VariableId, build_lifted, make_row, xvar, yvar
from .instance import Instance
from .oracle.checks import binary_patterns
from .oracle.simplex import Infeasible, lp_maximize
from .separation import EXHAUSTIVE, separate_exhaustive, separate_greedy

MAX_LOCATIONS = 16


class SolverGuardError(ValueError):
    pass


@dataclass(frozen=True)
class Objective:
    coeffs: tuple[tuple[VariableId, Fraction], ...]

    @classmethod
    def build(cls, coeffs: Mapping[VariableId, Fraction]) -> "Objective":
        items = sorted(((v, Fraction(a)) for v, a in coeffs.items() if a != 0), key=lambda t: t[0].sort_key())
        return cls(tuple(items))

    @classmethod
    def revenue_minus_cost(cls, inst: Instance, opening_cost: Optional[Sequence] = None) -> "Objective":
        r = inst.revenue_or_default()
        f = inst.opening_cost_or_default() if opening_cost is None else tuple(Fraction(c) for c in opening_cost)
        if len(f) != inst.n:
            raise ValueError(f"length mismatch: {len(f)} opening costs for {inst.n} locations")
        coeffs = {xvar(i, j): r[i] for i in range(inst.m) for j in range(inst.n)}
        coeffs.update({yvar(j): -f[j] for j in range(inst.n)})
        return cls.build(coeffs)

    def as_dict(self) -> dict[VariableId, Fraction]:
        return dict(self.coeffs)

    def value(self, point: PointXYQ) -> Fraction:
        return sum((a * point[v] for v, a in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class CutConfig:
    families: tuple[str, ...] = FAMILIES
    mode: str = EXHAUSTIVE
    rounds: int = 20
    budget: int = 50

    @classmethod
    def named(cls, name: str) -> "CutConfig":
        presets = {"all": FAMILIES, "none": (), "facet-only": (FACET,)}
        if name not in presets:
            raise ValueError(f"unknown cut preset {name!r}; expected one of {sorted(presets)}")
        return cls(families=presets[name])


@dataclass(frozen=True)
class BoundReport:
    bound_without_cuts: Fraction
    point_without_cuts: PointXYQ
    bound_with_cuts: Fraction
    point_with_cuts: PointXYQ
    cuts: tuple[LinearInequality, ...] = ()
    rounds: int = 0


@dataclass(frozen=True)
class SolveReport:
    value: Fraction
    point: PointXYQ
    y: tuple[int, ...]
    root_bound_without_cuts: Fraction
    root_bound_with_cuts: Fraction
    cuts: tuple[LinearInequality, ...]
    nodes: int
    seconds: float = field(default=0.0, compare=False)


def _cut_row(cut: LinearInequality):
    return make_row(dict(cut.coeffs), LE, cut.rhs, f"cut:{cut.family}")


class _CutPool:
    def __init__(self):
        self.cuts: list[LinearInequality] = []
        self._keys = set()

    def add(self, cut: LinearInequality) -> bool:
        key = (cut.coeffs, cut.rhs)
        if key in self._keys:
            return False
        self._keys.add(key)
        self.cuts.append(cut)
        return True


def _node_system(relaxed: ConstraintSystem, pool: _CutPool, fixings: Mapping[int, int]) -> ConstraintSystem:
    sys = relaxed.with_rows(_cut_row(c) for c in pool.cuts)
    if fixings:
        sys = sys.fix({yvar(j): Fraction(v) for j, v in fixings.items()})
    return sys


def _separate(inst, point, config: CutConfig):
    if config.mode == EXHAUSTIVE:
        return separate_exhaustive(inst, point, config.families)
    return separate_greedy(inst, point, config.budget, config.families)


def _solve_node(inst, relaxed, obj, pool, fixings, config):
    """LP bound at a node after the cut loop; None when the node is infeasible."""
    rounds = 0
    while True:
        try:
            value, point = lp_maximize(_node_system(relaxed, pool, fixings), obj)
        except Infeasible:
            return None
        if not config.families or rounds >= config.rounds:
            return value, point, rounds
        added = False
        for cut, _ in _separate(inst, point, config).cuts:
            added |= pool.add(cut)
        if not added:
            return value, point, rounds
        rounds += 1


def _relaxed(inst: Instance) -> ConstraintSystem:
    return build_lifted(inst).relax()


def root_lp(inst: Instance, obj: Optional[Objective] = None, config: CutConfig = CutConfig()) -> BoundReport:
    """Root relaxation bound before and after the separate-and-resolve loop."""
    obj = obj or Objective.revenue_minus_cost(inst)
    relaxed = _relaxed(inst)
    objective = obj.as_dict()
    plain_value, plain_point = lp_maximize(relaxed, objective)
    pool = _CutPool()
    value, point, rounds = _solve_node(inst, relaxed, objective, pool, {}, config)
    return BoundReport(plain_value, plain_point, value, point, tuple(pool.cuts), rounds)


def _most_fractional(point: PointXYQ, fixings) -> Optional[int]:
    best, best_dist = None, None
    half = Fraction(1, 2)
    for j, v in enumerate(point.y):
        if j in fixings or v.denominator == 1:
            continue
        dist = abs(v - half)
        if best is None or dist < best_dist:
            best, best_dist = j, dist
    return best


def _search(inst, relaxed, obj, pool, config, base: Mapping[int, int]):
    """Depth-first search below ``base``; returns (best value, best y, nodes)."""
    best_val, best_y = None, None
    nodes = 0
    stack = [dict(base)]
    while stack:
        fixings = stack.pop()
        nodes += 1
        res = _solve_node(inst, relaxed, obj, pool, fixings, config)
        if res is None:
            continue
        value, point, _ = res
        if best_val is not None and value < best_val:
            continue
        j = _most_fractional(point, fixings)
        if j is None:
            y = tuple(int(v) for v in point.y)
            if best_val is None or value > best_val or (value == best_val and y < best_y):
                best_val, best_y = value, y
            continue
        stack.append({**fixings, j: 1})
        stack.append({**fixings, j: 0})
    return best_val, best_y, nodes


def branch_and_bound(inst: Instance, obj: Optional[Objective] = None, config: CutConfig = CutConfig()) -> SolveReport:
    """Exact optimum; the reported ``y`` is the lexicographically smallest optimal one."""
    if inst.n > MAX_LOCATIONS:
        raise SolverGuardError(f"n = {inst.n} exceeds the solver guard of {MAX_LOCATIONS}")
    start = time.perf_counter()
    obj = obj or Objective.revenue_minus_cost(inst)
    objective = obj.as_dict()
    relaxed = _relaxed(inst)
    root_plain, _ = lp_maximize(relaxed, objective)
    pool = _CutPool()
    root = _solve_node(inst, relaxed, objective, pool, {}, config)
    best_val, best_y, nodes = _search(inst, relaxed, objective, pool, config, {})
    # canonical incumbent: fix y_1, y_2, ... to 0 whenever the optimum survives
    fixings: dict[int, int] = {}
    for j in range(inst.n):
        val, _, _ = _search(inst, relaxed, objective, pool, config, {**fixings, j: 0})
        fixings[j] = 0 if val is not None and val == best_val else 1
    y = tuple(fixings[j] for j in range(inst.n))
    value, point = lp_maximize(_node_system(relaxed, _CutPool(), fixings), objective)
    assert value == best_val, "canonical pass disagrees with the search"
    return SolveReport(
        best_val,
        point,
        y,
        root_plain,
        root[0],
        tuple(pool.cuts),
        nodes,
        time.perf_counter() - start,
    )


def pattern_optimum(inst: Instance, obj: Optional[Objective] = None) -> tuple[Fraction, tuple[int, ...]]:
    """Brute force over all binary ``y``: the best slice LP, smallest ``y`` on ties."""
    obj = obj or Objective.revenue_minus_cost(inst)
    lifted = build_lifted(inst)
    best = None
    for y in sorted(binary_patterns(inst.n)):
        value, _ = lp_maximize(lifted.fix({yvar(j): Fraction(y[j]) for j in range(inst.n)}), obj.as_dict())
        if best is None or value > best[0]:
            best = (value, y)
    return best
