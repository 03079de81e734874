"""Exact two-phase simplex on an integer (fraction-free) tableau.

The tableau ``M`` is kept integral together with a common positive
denominator ``D``: the true tableau is ``M / D``. A pivot on ``(r, e)``
replaces every other row by ``(p * M[i] - M[i][e] * M[r]) // D`` and sets
``D = p``; the division is exact for the same reason as in Bareiss
elimination. Entering and leaving variables follow Bland's rule.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Mapping

from ..exactmath import integer_row
from ..formulation import EQ, LE, ConstraintSystem, PointXYQ, VariableId
from .presolve import presolve


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


class _Tableau:
    def __init__(self, rows: list[list[int]], basis: list[int], ncols: int):
        self.M = rows  # constraint rows, last entry is the rhs
        self.basis = basis
        self.ncols = ncols
        self.D = 1
        self.z: list[int] = []
        self.zscale = 1

    def set_objective(self, cost: list[Fraction]) -> None:
        """Reduced-cost row for maximizing ``cost``; entries < 0 may enter."""
        den = lcm(*(c.denominator for c in cost)) if cost else 1
        ic = [int(c * den) for c in cost]
        z = [-ic[k] * self.D for k in range(self.ncols)] + [0]
        for row, b in zip(self.M, self.basis):
            cb = ic[b]
            if cb:
                for k in range(self.ncols + 1):
                    z[k] += cb * row[k]
        self.z = z
        self.zscale = den

    def value(self) -> Fraction:
        return Fraction(self.z[-1], self.D * self.zscale)

    def pivot(self, r: int, e: int) -> None:
        M, D = self.M, self.D
        prow = M[r]
        p = prow[e]
        width = self.ncols + 1
        nz = [k for k in range(width) if prow[k]]
        for i, row in enumerate(M):
            if i == r:
                continue
            f = row[e]
            if f:
                for k in range(width):
                    row[k] = row[k] * p
                for k in nz:
                    row[k] -= f * prow[k]
                for k in range(width):
                    row[k] //= D
            elif p != D:
                for k in range(width):
                    row[k] = row[k] * p // D
        z = self.z
        if z:
            f = z[e]
            if f:
                for k in range(width):
                    z[k] = z[k] * p
                for k in nz:
                    z[k] -= f * prow[k]
                for k in range(width):
                    z[k] //= D
            elif p != D:
                for k in range(width):
                    z[k] = z[k] * p // D
        self.D = p
        self.basis[r] = e
        if self.D < 0:
            self.D = -self.D
            for row in M:
                for k in range(width):
                    row[k] = -row[k]
            if z:
                for k in range(width):
                    z[k] = -z[k]

    def run(self, allowed: list[bool], max_iter: int = 100000) -> str:
        M = self.M
        for _ in range(max_iter):
            z = self.z
            e = next((k for k in range(self.ncols) if allowed[k] and z[k] < 0), None)
            if e is None:
                return "optimal"
            best = None
            for i, row in enumerate(M):
                a = row[e]
                if a > 0:
                    key_num, key_den = row[-1], a
                    if best is None:
                        best = (i, key_num, key_den)
                        continue
                    _, bn, bd = best
                    lhs, rhs = key_num * bd, bn * key_den
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best[0]]):
                        best = (i, key_num, key_den)
            if best is None:
                return "unbounded"
            self.pivot(best[0], e)
        raise LPError("iteration limit reached")


def solve_lp(rows, ncols: int, cost: list[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """Maximize ``cost . v`` over ``v >= 0`` subject to ``rows``.

    ``rows`` holds ``(coeffs, rel, rhs)`` with dense rational ``coeffs`` of
    length ``ncols`` and ``rel`` in ``{"<=", "="}``.
    """
    tab_rows: list[list[int]] = []
    kinds: list[str] = []
    for coeffs, rel, rhs in rows:
        vec = integer_row(list(coeffs) + [Fraction(rhs)])
        if vec[-1] < 0:
            vec = [-v for v in vec]
            rel = ">=" if rel == LE else EQ
        tab_rows.append(vec)
        kinds.append(rel)
    n_slack = sum(1 for rel in kinds if rel in (LE, ">="))
    n_art = sum(1 for rel in kinds if rel in (">=", EQ))
    total = ncols + n_slack + n_art
    M: list[list[int]] = []
    basis: list[int] = []
    s_col, a_col = ncols, ncols + n_slack
    art_cols = []
    for vec, rel in zip(tab_rows, kinds):
        row = vec[:-1] + [0] * (n_slack + n_art) + [vec[-1]]
        if rel == LE:
            row[s_col] = 1
            basis.append(s_col)
            s_col += 1
        elif rel == ">=":
            row[s_col] = -1
            s_col += 1
            row[a_col] = 1
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1
        else:
            row[a_col] = 1
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1
        M.append(row)
    tab = _Tableau(M, basis, total)
    is_art = [False] * total
    for c in art_cols:
        is_art[c] = True

    if art_cols:
        phase1 = [Fraction(-1) if is_art[k] else Fraction(0) for k in range(total)]
        tab.set_objective(phase1)
        status = tab.run([True] * total)
        if status != "optimal" or tab.value() < 0:
            raise Infeasible("linear system is infeasible")
        # drive zero-level artificials out of the basis
        r = 0
        while r < len(tab.M):
            if is_art[tab.basis[r]]:
                row = tab.M[r]
                e = next((k for k in range(total) if not is_art[k] and row[k] != 0), None)
                if e is None:
                    del tab.M[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, e)
            r += 1

    full_cost = list(cost) + [Fraction(0)] * (total - ncols)
    tab.set_objective(full_cost)
    status = tab.run([not a for a in is_art])
    if status == "unbounded":
        raise Unbounded("objective is unbounded over the system")
    values = [Fraction(0)] * ncols
    for row, b in zip(tab.M, tab.basis):
        if b < ncols:
            values[b] = Fraction(row[-1], tab.D)
    return tab.value(), values


def lp_maximize(sys: ConstraintSystem, objective: Mapping[VariableId, Fraction]) -> tuple[Fraction, PointXYQ]:
    """Exact optimum of a linear objective over a system without binaries.

    ``objective`` may mention fixed variables; their contribution is a
    constant. Returns the optimal value and the optimal basic point.
    """
    if sys.binary:
        raise ValueError("lp_maximize needs a system without binary markers (fix or relax first)")
    fixed = sys.fixed_values
    catalog = set(sys.variables)
    for v in objective:
        if v not in catalog and v not in fixed:
            raise ValueError(f"objective references unknown variable {v}")
    red = presolve(sys)
    if red.infeasible:
        raise Infeasible("a constant row is violated")
    const = sum((Fraction(a) * fixed[v] for v, a in objective.items() if v in fixed), Fraction(0))
    cols = red.free
    index = {v: k for k, v in enumerate(cols)}
    cost = [Fraction(objective.get(v, 0)) for v in cols]
    rows = []
    for r in red.rows:
        dense = [Fraction(0)] * len(cols)
        for v, a in r.coeffs:
            dense[index[v]] = a
        rows.append((dense, r.rel, r.rhs))
    value, vals = solve_lp(rows, len(cols), cost)
    assign = {v: vals[k] for k, v in enumerate(cols)}
    return value + const, sys.point(assign)


__all__ = ["lp_maximize", "solve_lp", "LPError", "Infeasible", "Unbounded"]
