"""Problem instances: data model, JSON ingestion, validation, generation.

Indices are 0-based inside the library. The JSON format and the CLI
speak the 1-based indices of the model (sites ``1..m``, locations
``1..n``); conversion happens in :mod:`servloc.jsonio` and the CLI.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import as_rational, format_rational


class InstanceError(ValueError):
    """Raised for malformed or invalid instance documents."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    path: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.path}: {self.message}"


@dataclass(frozen=True)
class Instance:
    """Capacities ``c_j`` and sole-center attractions ``d_ij``.

    ``opening_cost`` and ``revenue`` only feed the solver's objective.
    Construct through :func:`make_instance` (or :func:`parse_instance`) to
    get validation; the raw constructor is unchecked.
    """

    m: int
    n: int
    capacity: tuple[Fraction, ...]
    demand: tuple[tuple[Fraction, ...], ...]
    opening_cost: Optional[tuple[Fraction, ...]] = None
    revenue: Optional[tuple[Fraction, ...]] = None

    @property
    def strictly_positive(self) -> bool:
        """True when every ``d_ij > 0`` (needed by the facet conditions)."""
        return all(v > 0 for row in self.demand for v in row)

    def revenue_or_default(self) -> tuple[Fraction, ...]:
        return self.revenue if self.revenue is not None else (Fraction(1),) * self.m

    def opening_cost_or_default(self) -> tuple[Fraction, ...]:
        return self.opening_cost if self.opening_cost is not None else (Fraction(0),) * self.n

    def with_costs(self, opening_cost=None, revenue=None) -> "Instance":
        oc = tuple(as_rational(v) for v in opening_cost) if opening_cost is not None else self.opening_cost
        rv = tuple(as_rational(v) for v in revenue) if revenue is not None else self.revenue
        return make_instance(self.capacity, self.demand, oc, rv)


@dataclass(frozen=True)
class IndexSubsets:
    """Site subset ``I``, location subset ``J`` and optional extra location ``jprime``."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    jprime: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(set(self.I))))
        object.__setattr__(self, "J", tuple(sorted(set(self.J))))

    def check(self, inst: Instance) -> None:
        if not self.I:
            raise ValueError("I must be nonempty")
        if not self.J:
            raise ValueError("J must be nonempty")
        for i in self.I:
            if not 0 <= i < inst.m:
                raise ValueError(f"site index {i + 1} out of range 1..{inst.m}")
        for j in self.J:
            if not 0 <= j < inst.n:
                raise ValueError(f"location index {j + 1} out of range 1..{inst.n}")
        if self.jprime is not None:
            if not 0 <= self.jprime < inst.n:
                raise ValueError(f"jprime {self.jprime + 1} out of range 1..{inst.n}")
            if self.jprime in self.J:
                raise ValueError(f"jprime {self.jprime + 1} must not belong to J")


def _validate_parts(m, n, capacity, demand, opening_cost, revenue) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    err = lambda p, msg: out.append(Diagnostic("error", p, msg))  # noqa: E731
    if not isinstance(m, int) or m < 1:
        err("m", "must be a positive integer")
    if not isinstance(n, int) or n < 1:
        err("n", "must be a positive integer")
    if out:
        return out
    if len(capacity) != n:
        err("capacity", f"dimension mismatch: expected {n} entries, got {len(capacity)}")
    for j, c in enumerate(capacity):
        if c <= 0:
            err(f"capacity[{j}]", "capacity must be positive")
    if len(demand) != m:
        err("demand", f"dimension mismatch: expected {m} rows, got {len(demand)}")
    zero_seen = False
    for i, row in enumerate(demand):
        if len(row) != n:
            err(f"demand[{i}]", f"dimension mismatch: expected {n} entries, got {len(row)}")
        for j, d in enumerate(row):
            if d < 0:
                err(f"demand[{i}][{j}]", "demand must be nonnegative")
            elif d == 0:
                zero_seen = True
    if opening_cost is not None and len(opening_cost) != n:
        err("opening_cost", f"dimension mismatch: expected {n} entries, got {len(opening_cost)}")
    if revenue is not None and len(revenue) != m:
        err("revenue", f"dimension mismatch: expected {m} entries, got {len(revenue)}")
    if zero_seen:
        out.append(Diagnostic("warning", "demand", "theorem hypotheses need d_ij>0"))
    return out


def validate(inst: Instance) -> list[Diagnostic]:
    """All invariant violations (errors) plus the zero-demand warning."""
    return _validate_parts(inst.m, inst.n, inst.capacity, inst.demand, inst.opening_cost, inst.revenue)


def make_instance(capacity, demand, opening_cost=None, revenue=None) -> Instance:
    """Build a validated :class:`Instance`; numerals may be ints, Fractions or "p/q"."""
    cap = tuple(as_rational(v) for v in capacity)
    dem = tuple(tuple(as_rational(v) for v in row) for row in demand)
    oc = tuple(as_rational(v) for v in opening_cost) if opening_cost is not None else None
    rv = tuple(as_rational(v) for v in revenue) if revenue is not None else None
    inst = Instance(len(dem), len(cap), cap, dem, oc, rv)
    _raise_on_errors(validate(inst))
    return inst


def _raise_on_errors(diags: Sequence[Diagnostic]) -> None:
    for d in diags:
        if d.level == "error":
            raise InstanceError(d.path, d.message)


def _numerals(value, path: str, length: Optional[int] = None) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise InstanceError(path, "expected an array of numerals")
    if length is not None and len(value) != length:
        raise InstanceError(path, f"dimension mismatch: expected {length} entries, got {len(value)}")
    out = []
    for k, v in enumerate(value):
        try:
            out.append(as_rational(v))
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"{path}[{k}]", str(exc)) from None
    return tuple(out)


def instance_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("", "instance document must be a JSON object")
    for key in ("m", "n", "capacity", "demand"):
        if key not in doc:
            raise InstanceError(key, "missing required key")
    m, n = doc["m"], doc["n"]
    for key, v in (("m", m), ("n", n)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise InstanceError(key, "must be a positive integer")
    capacity = _numerals(doc["capacity"], "capacity", n)
    rows = doc["demand"]
    if not isinstance(rows, list):
        raise InstanceError("demand", "expected an array of rows")
    if len(rows) != m:
        raise InstanceError("demand", f"dimension mismatch: expected {m} rows, got {len(rows)}")
    demand = tuple(_numerals(r, f"demand[{i}]", n) for i, r in enumerate(rows))
    opening_cost = _numerals(doc["opening_cost"], "opening_cost", n) if doc.get("opening_cost") is not None else None
    revenue = _numerals(doc["revenue"], "revenue", m) if doc.get("revenue") is not None else None
    unknown = set(doc) - {"m", "n", "capacity", "demand", "opening_cost", "revenue"}
    if unknown:
        raise InstanceError(sorted(unknown)[0], "unknown key")
    inst = Instance(m, n, capacity, demand, opening_cost, revenue)
    _raise_on_errors(validate(inst))
    return inst


def parse_instance(text: str) -> Instance:
    """Parse the JSON instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("", f"malformed document: {exc}") from None
    return instance_from_dict(doc)


def instance_to_dict(inst: Instance) -> dict:
    doc = {
        "m": inst.m,
        "n": inst.n,
        "capacity": [format_rational(v) for v in inst.capacity],
        "demand": [[format_rational(v) for v in row] for row in inst.demand],
    }
    if inst.opening_cost is not None:
        doc["opening_cost"] = [format_rational(v) for v in inst.opening_cost]
    if inst.revenue is not None:
        doc["revenue"] = [format_rational(v) for v in inst.revenue]
    return doc


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


@dataclass(frozen=True)
class Ranges:
    """Inclusive integer bounds for random generation."""

    capacity: tuple[int, int] = (1, 5)
    demand: tuple[int, int] = (1, 4)


def generate_random(m: int, n: int, seed: int, ranges: Optional[Ranges] = None) -> Instance:
    """Deterministic integer-valued instance; ``d_ij >= 1`` under the default ranges."""
    ranges = ranges or Ranges()
    if m < 1 or n < 1:
        raise ValueError("m and n must be at least 1")
    (clo, chi), (dlo, dhi) = ranges.capacity, ranges.demand
    if clo > chi or dlo > dhi:
        raise ValueError("empty range")
    if clo < 1:
        raise ValueError("capacity range must stay positive")
    if dlo < 0:
        raise ValueError("demand range must stay nonnegative")
    rng = random.Random(seed)
    cap = [rng.randint(clo, chi) for _ in range(n)]
    dem = [[rng.randint(dlo, dhi) for _ in range(n)] for _ in range(m)]
    return make_instance(cap, dem)


def reference_instance() -> Instance:
    """Three sites, two locations, as in the capacity/attraction competition figure.

    ``d_i1 = (2, 2, 1)`` and the joint attraction ``(2, 2, 2)`` come from the
    figure; the capacities ``(4, 4)`` and ``d_i2`` are a reconstruction (the
    figure never prints them) chosen so that every narrated regime holds.
    """
    return make_instance([4, 4], [[2, 1], [2, 2], [1, 2]])
