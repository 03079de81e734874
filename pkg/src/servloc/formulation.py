"""Attracted demand and the lifted constraint systems.

The nonlinear max-attraction set is never written down as constraints.
Everything goes through the lifted system over ``(x, y, q)``::

    sum_i x_ij <= c_j y_j                 (capacity,    one per location)
    sum_j x_ij <= sum_j d_ij q_ij         (demand-link, one per site)
    sum_j q_ij <= 1                       (q-sum,       one per site)
    q_ij <= y_j                           (q-bound,     one per pair)
    x, q >= 0,  y binary

or, with ``y`` fixed, through :func:`attracted_demand`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .exactmath import format_rational
from .instance import IndexSubsets, Instance

X, Y, Q = "x", "y", "q"
_KIND_ORDER = {X: 0, Y: 1, Q: 2}

LE, EQ = "<=", "="


class VariableId(NamedTuple):
    kind: str
    i: Optional[int]
    j: int

    def __str__(self):
        if self.kind == Y:
            return f"y_{self.j + 1}"
        return f"{self.kind}_{self.i + 1}_{self.j + 1}"

    def sort_key(self):
        return (_KIND_ORDER[self.kind], -1 if self.i is None else self.i, self.j)


def xvar(i: int, j: int) -> VariableId:
    return VariableId(X, i, j)


def yvar(j: int) -> VariableId:
    return VariableId(Y, None, j)


def qvar(i: int, j: int) -> VariableId:
    return VariableId(Q, i, j)


def all_variables(m: int, n: int) -> tuple[VariableId, ...]:
    """Canonical order: ``x`` row-major, then ``y``, then ``q`` row-major."""
    xs = [xvar(i, j) for i in range(m) for j in range(n)]
    ys = [yvar(j) for j in range(n)]
    qs = [qvar(i, j) for i in range(m) for j in range(n)]
    return tuple(xs + ys + qs)


def variable_index(m: int, n: int, v: VariableId) -> int:
    if v.kind == X:
        return v.i * n + v.j
    if v.kind == Y:
        return m * n + v.j
    return m * n + n + v.i * n + v.j


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[VariableId, Fraction], ...]
    rel: str
    rhs: Fraction
    tag: str

    def lhs(self, values: Mapping[VariableId, Fraction]) -> Fraction:
        return sum((a * values.get(v, 0) for v, a in self.coeffs), Fraction(0))

    def satisfied(self, values: Mapping[VariableId, Fraction]) -> bool:
        lhs = self.lhs(values)
        return lhs <= self.rhs if self.rel == LE else lhs == self.rhs


def make_row(coeffs: Mapping[VariableId, Fraction] | Iterable[tuple[VariableId, Fraction]], rel: str, rhs, tag: str) -> Row:
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    merged: dict[VariableId, Fraction] = {}
    for v, a in items:
        merged[v] = merged.get(v, Fraction(0)) + Fraction(a)
    cleaned = tuple(sorted(((v, a) for v, a in merged.items() if a != 0), key=lambda t: t[0].sort_key()))
    return Row(cleaned, rel, Fraction(rhs), tag)


@dataclass(frozen=True)
class PointXYQ:
    """Exact values for every ``x_ij``, ``y_j`` and ``q_ij``."""

    x: tuple[tuple[Fraction, ...], ...]
    y: tuple[Fraction, ...]
    q: tuple[tuple[Fraction, ...], ...]

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def n(self) -> int:
        return len(self.y)

    @classmethod
    def zeros(cls, m: int, n: int) -> "PointXYQ":
        z = Fraction(0)
        return cls(tuple((z,) * n for _ in range(m)), (z,) * n, tuple((z,) * n for _ in range(m)))

    @classmethod
    def from_values(cls, m: int, n: int, values: Mapping[VariableId, Fraction]) -> "PointXYQ":
        g = lambda v: Fraction(values.get(v, 0))  # noqa: E731
        return cls(
            tuple(tuple(g(xvar(i, j)) for j in range(n)) for i in range(m)),
            tuple(g(yvar(j)) for j in range(n)),
            tuple(tuple(g(qvar(i, j)) for j in range(n)) for i in range(m)),
        )

    @classmethod
    def from_vector(cls, m: int, n: int, vec: Sequence[Fraction]) -> "PointXYQ":
        vec = [Fraction(v) for v in vec]
        mn = m * n
        return cls(
            tuple(tuple(vec[i * n:(i + 1) * n]) for i in range(m)),
            tuple(vec[mn:mn + n]),
            tuple(tuple(vec[mn + n + i * n: mn + n + (i + 1) * n]) for i in range(m)),
        )

    def as_vector(self) -> tuple[Fraction, ...]:
        return tuple(v for row in self.x for v in row) + tuple(self.y) + tuple(v for row in self.q for v in row)

    def values(self) -> dict[VariableId, Fraction]:
        out: dict[VariableId, Fraction] = {}
        for i in range(self.m):
            for j in range(self.n):
                out[xvar(i, j)] = self.x[i][j]
                out[qvar(i, j)] = self.q[i][j]
        for j in range(self.n):
            out[yvar(j)] = self.y[j]
        return out

    def __getitem__(self, v: VariableId) -> Fraction:
        if v.kind == X:
            return self.x[v.i][v.j]
        if v.kind == Y:
            return self.y[v.j]
        return self.q[v.i][v.j]

    def perturbed(self, delta: Mapping[VariableId, Fraction]) -> "PointXYQ":
        vals = self.values()
        for v, a in delta.items():
            vals[v] = vals[v] + Fraction(a)
        return PointXYQ.from_values(self.m, self.n, vals)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear rows over named nonnegative variables.

    ``variables`` lists the free variables; ``fixed`` holds variables that
    were substituted by constants. Every variable has lower bound 0.
    """

    m: int
    n: int
    variables: tuple[VariableId, ...]
    rows: tuple[Row, ...]
    binary: frozenset = field(default_factory=frozenset)
    fixed: tuple[tuple[VariableId, Fraction], ...] = ()

    def __post_init__(self):
        catalog = set(self.variables)
        for r in self.rows:
            seen = set()
            for v, _ in r.coeffs:
                if v not in catalog:
                    raise ValueError(f"row {r.tag} references {v} outside the variable catalog")
                if v in seen:
                    raise ValueError(f"row {r.tag} repeats {v}")
                seen.add(v)

    @property
    def fixed_values(self) -> dict[VariableId, Fraction]:
        return dict(self.fixed)

    def with_rows(self, rows: Iterable[Row]) -> "ConstraintSystem":
        return ConstraintSystem(self.m, self.n, self.variables, self.rows + tuple(rows), self.binary, self.fixed)

    def fix(self, values: Mapping[VariableId, Fraction], tag: Optional[str] = None) -> "ConstraintSystem":
        """Substitute constants for some variables and drop them from the catalog."""
        values = {v: Fraction(a) for v, a in values.items()}
        for v in values:
            if v not in self.variables:
                raise ValueError(f"cannot fix {v}: not a free variable")
        rows = []
        for r in self.rows:
            shift = Fraction(0)
            kept = []
            for v, a in r.coeffs:
                if v in values:
                    shift += a * values[v]
                else:
                    kept.append((v, a))
            rows.append(Row(tuple(kept), r.rel, r.rhs - shift, r.tag))
        variables = tuple(v for v in self.variables if v not in values)
        merged = dict(self.fixed)
        merged.update(values)
        fixed = tuple(sorted(merged.items(), key=lambda t: t[0].sort_key()))
        return ConstraintSystem(self.m, self.n, variables, tuple(rows), frozenset(self.binary - set(values)), fixed)

    def relax(self) -> "ConstraintSystem":
        """Drop integrality: binary variables become ``0 <= y <= 1``."""
        bounds = [make_row({v: 1}, LE, 1, "bound") for v in sorted(self.binary, key=VariableId.sort_key)]
        return ConstraintSystem(self.m, self.n, self.variables, self.rows + tuple(bounds), frozenset(), self.fixed)

    def point(self, values: Mapping[VariableId, Fraction]) -> PointXYQ:
        full = dict(self.fixed)
        full.update(values)
        return PointXYQ.from_values(self.m, self.n, full)

    def contains(self, values: Mapping[VariableId, Fraction]) -> bool:
        """Exact membership of an assignment (free and fixed variables)."""
        for v, a in self.fixed:
            if Fraction(values.get(v, 0)) != a:
                return False
        for v in self.variables:
            val = Fraction(values.get(v, 0))
            if val < 0:
                return False
            if v in self.binary and val not in (0, 1):
                return False
        return all(r.satisfied(values) for r in self.rows)

    def to_dict(self) -> dict:
        """Debug dump; the layout is not a stable interface."""
        return {
            "m": self.m,
            "n": self.n,
            "variables": [str(v) for v in self.variables],
            "binary": sorted(str(v) for v in self.binary),
            "fixed": {str(v): format_rational(a) for v, a in self.fixed},
            "rows": [
                {
                    "tag": r.tag,
                    "coeffs": {str(v): format_rational(a) for v, a in r.coeffs},
                    "rel": r.rel,
                    "rhs": format_rational(r.rhs),
                }
                for r in self.rows
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_binary(inst: Instance, y: Sequence) -> tuple[int, ...]:
    if len(y) != inst.n:
        raise ValueError(f"length mismatch: y has {len(y)} entries, expected {inst.n}")
    out = []
    for v in y:
        if v not in (0, 1):
            raise ValueError(f"y must be binary, got {v!r}")
        out.append(int(v))
    return tuple(out)


def attracted_demand(inst: Instance, y: Sequence[int]) -> tuple[Fraction, ...]:
    """Demand of every site under the max-attraction rule (0 if nothing is open)."""
    y = _check_binary(inst, y)
    opened = [j for j in range(inst.n) if y[j]]
    if not opened:
        return (Fraction(0),) * inst.m
    return tuple(max(inst.demand[i][j] for j in opened) for i in range(inst.m))


def argmax_location(inst: Instance, i: int, y: Sequence[int]) -> Optional[int]:
    """Most attractive open location for site ``i``; ties go to the smallest index."""
    best = None
    for j in range(inst.n):
        if y[j] and (best is None or inst.demand[i][j] > inst.demand[i][best]):
            best = j
    return best


def lift_q(inst: Instance, y: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    """The assignment ``q`` that routes each site to its most attractive open location."""
    y = _check_binary(inst, y)
    rows = []
    for i in range(inst.m):
        k = argmax_location(inst, i, y)
        rows.append(tuple(Fraction(1 if j == k else 0) for j in range(inst.n)))
    return tuple(rows)


def build_lifted(inst: Instance) -> ConstraintSystem:
    m, n = inst.m, inst.n
    rows: list[Row] = []
    for j in range(n):
        coeffs = {xvar(i, j): 1 for i in range(m)}
        coeffs[yvar(j)] = -inst.capacity[j]
        rows.append(make_row(coeffs, LE, 0, "capacity"))
    for i in range(m):
        coeffs = {xvar(i, j): 1 for j in range(n)}
        for j in range(n):
            coeffs[qvar(i, j)] = coeffs.get(qvar(i, j), 0) - inst.demand[i][j]
        rows.append(make_row(coeffs, LE, 0, "demand-link"))
    for i in range(m):
        rows.append(make_row({qvar(i, j): 1 for j in range(n)}, LE, 1, "q-sum"))
    for i in range(m):
        for j in range(n):
            rows.append(make_row({qvar(i, j): 1, yvar(j): -1}, LE, 0, "q-bound"))
    binary = frozenset(yvar(j) for j in range(n))
    return ConstraintSystem(m, n, all_variables(m, n), tuple(rows), binary)


def fix_binary(sys: ConstraintSystem, y_hat: Sequence[int]) -> ConstraintSystem:
    """Slice at a binary location vector: ``y`` becomes constant."""
    if len(y_hat) != sys.n:
        raise ValueError(f"length mismatch: y has {len(y_hat)} entries, expected {sys.n}")
    for v in y_hat:
        if v not in (0, 1):
            raise ValueError(f"y must be binary, got {v!r}")
    return sys.fix({yvar(j): Fraction(y_hat[j]) for j in range(sys.n)})


def restrict_subsets(sys: ConstraintSystem, sub: IndexSubsets) -> ConstraintSystem:
    """Add the fixing rows that carve out the face for the subsets ``I`` and ``J``."""
    if not sub.I or not sub.J:
        raise ValueError("I and J must be nonempty")
    for i in sub.I:
        if not 0 <= i < sys.m:
            raise ValueError(f"site index {i + 1} out of range")
    for j in sub.J:
        if not 0 <= j < sys.n:
            raise ValueError(f"location index {j + 1} out of range")
    inside = {(i, j) for i in sub.I for j in sub.J}
    fixings = []
    catalog = set(sys.variables)
    for j in range(sys.n):
        if j not in sub.J and yvar(j) in catalog:
            fixings.append(make_row({yvar(j): 1}, EQ, 0, "fixing"))
    for i in range(sys.m):
        for j in range(sys.n):
            if (i, j) in inside:
                continue
            for v in (xvar(i, j), qvar(i, j)):
                if v in catalog:
                    fixings.append(make_row({v: 1}, EQ, 0, "fixing"))
    return sys.with_rows(fixings)


def max_attraction_region(inst: Instance, y_hat: Sequence[int]) -> ConstraintSystem:
    """The slice of the original (unlifted) set at fixed ``y``, over ``x`` only."""
    y_hat = _check_binary(inst, y_hat)
    dem = attracted_demand(inst, y_hat)
    m, n = inst.m, inst.n
    rows = []
    for j in range(n):
        rows.append(make_row({xvar(i, j): 1 for i in range(m)}, LE, inst.capacity[j] * y_hat[j], "capacity"))
    for i in range(m):
        rows.append(make_row({xvar(i, j): 1 for j in range(n)}, LE, dem[i], "demand"))
    xs = tuple(xvar(i, j) for i in range(m) for j in range(n))
    fixed = tuple((yvar(j), Fraction(y_hat[j])) for j in range(n))
    return ConstraintSystem(m, n, xs, tuple(rows), frozenset(), fixed)
