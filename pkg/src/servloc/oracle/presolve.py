"""Remove variables that the rows force to zero.

With every variable nonnegative, a row ``sum a_k v_k <= 0`` with all
``a_k >= 0`` pins each ``v_k`` with ``a_k > 0`` to zero (likewise for an
equality whose coefficients share a sign). Closed locations produce many
such rows, and dropping them shrinks both the LPs and vertex enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..formulation import EQ, LE, ConstraintSystem, Row, VariableId


@dataclass(frozen=True)
class Reduced:
    free: tuple[VariableId, ...]
    zeros: frozenset
    rows: tuple[Row, ...]
    infeasible: bool


def presolve(sys: ConstraintSystem) -> Reduced:
    zeros: set[VariableId] = set()
    rows = list(sys.rows)
    changed = True
    while changed:
        changed = False
        for r in rows:
            live = [(v, a) for v, a in r.coeffs if v not in zeros]
            if not live or r.rhs != 0:
                continue
            pos = all(a > 0 for _, a in live)
            neg = all(a < 0 for _, a in live)
            if (r.rel == LE and pos) or (r.rel == EQ and (pos or neg)):
                zeros.update(v for v, _ in live)
                changed = True
    out = []
    infeasible = False
    for r in rows:
        live = tuple((v, a) for v, a in r.coeffs if v not in zeros)
        if not live:
            ok = Fraction(0) <= r.rhs if r.rel == LE else r.rhs == 0
            infeasible |= not ok
            continue
        out.append(Row(live, r.rel, r.rhs, r.tag))
    free = tuple(v for v in sys.variables if v not in zeros)
    return Reduced(free, frozenset(zeros), tuple(out), infeasible)
