"""JSON documents for cuts, points and reports.

Indices are 1-based in files and 0-based in memory. Numerals are JSON
integers or "p/q" strings, so every value round-trips exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cuts import FAMILIES, LinearInequality
from .exactmath import as_rational, format_rational
from .formulation import PointXYQ, VariableId, X, Y, xvar, yvar
from .instance import IndexSubsets, InstanceError


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _load(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("", f"malformed {what} document: {exc}") from None


def _num(value, path):
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise InstanceError(path, str(exc)) from None


def _index(value, upper, path) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= upper:
        raise InstanceError(path, f"index must be an integer in 1..{upper}")
    return value - 1


def cut_to_dict(cut: LinearInequality) -> dict:
    sub = cut.subsets
    doc = {
        "family": cut.family,
        "I": [i + 1 for i in sub.I] if sub else [],
        "J": [j + 1 for j in sub.J] if sub else [],
    }
    if sub is not None and sub.jprime is not None:
        doc["jprime"] = sub.jprime + 1
    doc["coeff_x"] = [[v.i + 1, v.j + 1, format_rational(a)] for v, a in cut.coeffs if v.kind == X]
    doc["coeff_y"] = [[v.j + 1, format_rational(a)] for v, a in cut.coeffs if v.kind == Y]
    doc["rhs"] = format_rational(cut.rhs)
    return doc


def cut_from_dict(doc, m: int, n: int) -> LinearInequality:
    if not isinstance(doc, dict):
        raise InstanceError("", "cut document must be an object")
    unknown = set(doc) - {"family", "I", "J", "jprime", "coeff_x", "coeff_y", "rhs"}
    if unknown:
        raise InstanceError(sorted(unknown)[0], "unknown key")
    if "rhs" not in doc:
        raise InstanceError("rhs", "missing")
    family = doc.get("family")
    if family is not None and family not in FAMILIES:
        raise InstanceError("family", f"expected one of {list(FAMILIES)}")
    coeffs: dict[VariableId, Fraction] = {}
    for k, entry in enumerate(doc.get("coeff_x", [])):
        path = f"coeff_x[{k}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise InstanceError(path, "expected [i, j, numeral]")
        v = xvar(_index(entry[0], m, path + "[0]"), _index(entry[1], n, path + "[1]"))
        coeffs[v] = coeffs.get(v, Fraction(0)) + _num(entry[2], path + "[2]")
    for k, entry in enumerate(doc.get("coeff_y", [])):
        path = f"coeff_y[{k}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise InstanceError(path, "expected [j, numeral]")
        v = yvar(_index(entry[0], n, path + "[0]"))
        coeffs[v] = coeffs.get(v, Fraction(0)) + _num(entry[1], path + "[1]")
    sub = None
    if doc.get("I") or doc.get("J"):
        I = tuple(_index(i, m, f"I[{k}]") for k, i in enumerate(doc.get("I", [])))
        J = tuple(_index(j, n, f"J[{k}]") for k, j in enumerate(doc.get("J", [])))
        jp = doc.get("jprime")
        sub = IndexSubsets(I, J, None if jp is None else _index(jp, n, "jprime"))
    return LinearInequality.build(coeffs, _num(doc["rhs"], "rhs"), family, sub)


def parse_cut(text: str, m: int, n: int) -> LinearInequality:
    return cut_from_dict(_load(text, "cut"), m, n)


def point_to_dict(p: PointXYQ) -> dict:
    return {
        "x": [[i + 1, j + 1, format_rational(v)] for i, row in enumerate(p.x) for j, v in enumerate(row) if v != 0],
        "y": [format_rational(v) for v in p.y],
        "q": [[i + 1, j + 1, format_rational(v)] for i, row in enumerate(p.q) for j, v in enumerate(row) if v != 0],
    }


def point_from_dict(doc, m: int, n: int) -> PointXYQ:
    if not isinstance(doc, dict):
        raise InstanceError("", "point document must be an object")
    unknown = set(doc) - {"x", "y", "q"}
    if unknown:
        raise InstanceError(sorted(unknown)[0], "unknown key")
    x = [[Fraction(0)] * n for _ in range(m)]
    q = [[Fraction(0)] * n for _ in range(m)]
    for key, target in (("x", x), ("q", q)):
        for k, entry in enumerate(doc.get(key, [])):
            path = f"{key}[{k}]"
            if not isinstance(entry, list) or len(entry) != 3:
                raise InstanceError(path, "expected [i, j, numeral]")
            i, j = _index(entry[0], m, path + "[0]"), _index(entry[1], n, path + "[1]")
            target[i][j] = _num(entry[2], path + "[2]")
    ys = doc.get("y", [0] * n)
    if not isinstance(ys, list) or len(ys) != n:
        raise InstanceError("y", f"dimension mismatch: expected {n} numerals")
    y = tuple(_num(v, f"y[{k}]") for k, v in enumerate(ys))
    return PointXYQ(tuple(map(tuple, x)), y, tuple(map(tuple, q)))


def parse_point(text: str, m: int, n: int) -> PointXYQ:
    return point_from_dict(_load(text, "point"), m, n)


def validity_to_dict(report) -> dict:
    return {
        "valid": report.valid,
        "worst_pattern": list(report.worst_pattern),
        "slack": format_rational(report.slack),
        "tight_patterns": [list(p) for p in report.tight_patterns],
        "maximizer": point_to_dict(report.maximizer),
    }


def facet_to_dict(report) -> dict:
    return {
        "dimension": report.dimension,
        "face_dimension": report.face_dimension,
        "classification": report.classification,
    }


def separation_to_dict(result) -> dict:
    cuts = []
    for cut, viol in result.cuts:
        doc = cut_to_dict(cut)
        doc["violation"] = format_rational(viol)
        cuts.append(doc)
    return {"mode": result.mode, "examined": result.examined, "cuts": cuts}


def solve_to_dict(report) -> dict:
    # wall time is left out so repeated runs print identical bytes
    return {
        "value": format_rational(report.value),
        "y": list(report.y),
        "point": point_to_dict(report.point),
        "root_bound_without_cuts": format_rational(report.root_bound_without_cuts),
        "root_bound_with_cuts": format_rational(report.root_bound_with_cuts),
        "cuts": [cut_to_dict(c) for c in report.cuts],
        "nodes": report.nodes,
    }


def family_to_dict(fam) -> dict:
    return {
        "claimed": fam.claimed,
        "achieved": fam.achieved(),
        "epsilon": None if fam.epsilon is None else format_rational(fam.epsilon),
        "sizes": fam.sizes(),
        "members": {k: [[format_rational(a) for a in v] for v in vs] for k, vs in fam.members.items()},
    }


__all__ = [
    "dumps",
    "cut_to_dict",
    "cut_from_dict",
    "parse_cut",
    "point_to_dict",
    "point_from_dict",
    "parse_point",
    "validity_to_dict",
    "facet_to_dict",
    "separation_to_dict",
    "solve_to_dict",
    "family_to_dict",
]
