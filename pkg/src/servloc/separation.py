"""Find family cuts violated by a given point."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cuts import FAMILIES, LinearInequality, all_subsets, generate_family_cuts
from .formulation import PointXYQ
from .instance import Instance

EXHAUSTIVE = "exhaustive"
GREEDY = "greedy"
MAX_EXHAUSTIVE_SITES = 12
MAX_EXHAUSTIVE_LOCATIONS = 8


class SeparationGuardError(ValueError):
    pass


@dataclass(frozen=True)
class SeparationResult:
    cuts: tuple[tuple[LinearInequality, Fraction], ...]
    mode: str
    examined: int

    @property
    def found(self) -> bool:
        return bool(self.cuts)

    def best(self) -> Optional[tuple[LinearInequality, Fraction]]:
        return self.cuts[0] if self.cuts else None


def _order(found) -> tuple:
    unique = {}
    for cut, viol in found:
        unique[(cut.sort_key(), cut.coeffs, cut.rhs)] = (cut, viol)
    return tuple(sorted(unique.values(), key=lambda cv: (-cv[1], cv[0].sort_key())))


def _violated(inst, point, I, J, families):
    out = []
    for cut in generate_family_cuts(inst, I, J, families):
        v = cut.violation(point)
        if v > 0:
            out.append((cut, v))
    return out


def _scan_sites(args):
    inst, point, I, families = args
    found = []
    count = 0
    for J in all_subsets(inst.n):
        count += 1
        found.extend(_violated(inst, point, I, J, families))
    return found, count


def separate_exhaustive(inst: Instance, point: PointXYQ, families=FAMILIES, jobs: int = 1) -> SeparationResult:
    """Scan every ``(I, J)`` pair and every admissible cut of the enabled families."""
    if inst.m > MAX_EXHAUSTIVE_SITES or inst.n > MAX_EXHAUSTIVE_LOCATIONS:
        raise SeparationGuardError(
            f"exhaustive separation limited to m <= {MAX_EXHAUSTIVE_SITES}, n <= {MAX_EXHAUSTIVE_LOCATIONS}"
        )
    tasks = [(inst, point, I, tuple(families)) for I in all_subsets(inst.m)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_sites, tasks))
    else:
        parts = [_scan_sites(t) for t in tasks]
    found = [cv for f, _ in parts for cv in f]
    return SeparationResult(_order(found), EXHAUSTIVE, sum(c for _, c in parts))


class _Budget:
    def __init__(self, budget: int):
        self.left = budget
        self.used = 0
        self.found = []

    def evaluate(self, inst, point, I, J, families) -> Optional[Fraction]:
        """Best violation of ``(I, J)`` (may be <= 0), or None once the budget is spent."""
        if self.left <= 0:
            return None
        self.left -= 1
        self.used += 1
        best = None
        for cut in generate_family_cuts(inst, I, J, families):
            v = cut.violation(point)
            if v > 0:
                self.found.append((cut, v))
            if best is None or v > best:
                best = v
        return best


def _better(a, b) -> bool:
    return a is not None and (b is None or a > b)


def _sites_for(inst, point, J):
    I = tuple(i for i in range(inst.m) if sum(point.x[i][j] for j in J) > 0)
    return I or tuple(range(inst.m))


def _improve_sites(inst, point, I, J, score, tracker, families):
    """Single-site add/drop moves, first improvement, until none helps."""
    improved = True
    while improved and tracker.left > 0:
        improved = False
        for i in range(inst.m):
            cand = tuple(sorted(set(I) ^ {i}))
            if not cand:
                continue
            s = tracker.evaluate(inst, point, cand, J, families)
            if s is None:
                return I, score
            if _better(s, score):
                I, score, improved = cand, s, True
                break
    return I, score


def separate_greedy(inst: Instance, point: PointXYQ, budget: int = 50, families=FAMILIES) -> SeparationResult:
    """Grow ``J`` from the best singleton; each ``(I, J)`` evaluation costs one unit of budget."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    tracker = _Budget(budget)
    best_J, best_I, best = None, None, None
    for j in range(inst.n):
        J = (j,)
        I = _sites_for(inst, point, J)
        s = tracker.evaluate(inst, point, I, J, families)
        if s is None:
            break
        if _better(s, best):
            best_J, best_I, best = J, I, s
    if best_J is not None:
        best_I, best = _improve_sites(inst, point, best_I, best_J, best, tracker, families)
    while best_J is not None and tracker.left > 0 and len(best_J) < inst.n:
        step = None
        for j in range(inst.n):
            if j in best_J:
                continue
            J = tuple(sorted(best_J + (j,)))
            I = _sites_for(inst, point, J)
            s = tracker.evaluate(inst, point, I, J, families)
            if s is None:
                break
            if _better(s, step[2] if step else None):
                step = (J, I, s)
        if step is None or not _better(step[2], best):
            break
        best_J, best_I, best = step
        best_I, best = _improve_sites(inst, point, best_I, best_J, best, tracker, families)
    return SeparationResult(_order(tracker.found), GREEDY, tracker.used)
