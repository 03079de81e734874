"""Exact rational linear algebra: rank, affine rank and linear solves.

Everything works on :class:`fractions.Fraction` (aliased ``Rational``).
Elimination is fraction-free: each row is scaled to integers and
eliminated with Bareiss' one-step division, so intermediate entries
stay bounded by minors of the input.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

INCONSISTENT = "inconsistent"
UNDERDETERMINED = "underdetermined"


def as_rational(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numerals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"not an exact numeral: {value!r}") from None
        if q <= 0:
            raise ValueError(f"denominator must be a positive integer: {value!r}")
        return Fraction(p, q)
    raise TypeError(f"not an exact numeral: {value!r} ({type(value).__name__})")


def format_rational(value: Fraction):
    """Inverse of :func:`as_rational` for JSON: int when integral, else "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def integer_row(row: Sequence[Number]) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    return [int(v * den) for v in row]


def primitive(row: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g <= 1:
        return tuple(row)
    return tuple(v // g for v in row)


def _check_rect(M: Sequence[Sequence[Number]]) -> int:
    if not M:
        return 0
    width = len(M[0])
    for r in M:
        if len(r) != width:
            raise ValueError("ragged matrix: rows have different lengths")
    return width


def _bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination in place.

    Returns the echelon rows (only the first ``rank`` are meaningful) and
    the pivot column of each.
    """
    nrows = len(rows)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        pivot_row = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            for k in range(c + 1, ncols):
                # Bareiss: the division is exact
                row[k] = (piv * row[k] - f * pivot_row[k]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(M: Sequence[Sequence[Number]]) -> int:
    """Exact rank of a rational matrix.

    Rows are reduced one at a time against an integer echelon basis kept
    in primitive form, stopping as soon as the rank reaches the column
    count. Tall matrices (thousands of vertices in a few dozen
    coordinates) therefore cost little more than their first full-rank rows.
    """
    ncols = _check_rect(M)
    if ncols == 0:
        return 0
    basis: list[tuple[int, list[int]]] = []  # (pivot column, row), pivots increasing
    for raw in M:
        vec = integer_row(raw)
        for pc, row in basis:
            f = vec[pc]
            if f:
                piv = row[pc]
                vec = [piv * a - f * b for a, b in zip(vec, row)]
        pc = next((k for k, v in enumerate(vec) if v), None)
        if pc is None:
            continue
        # keep pivots sorted so later rows meet them in column order
        pos = next((k for k, (c, _) in enumerate(basis) if c > pc), len(basis))
        basis.insert(pos, (pc, list(primitive(vec))))
        if len(basis) == ncols:
            break
    return len(basis)


def affine_rank(points: Sequence[Sequence[Number]]) -> int:
    """Largest number of affinely independent points among ``points``.

    ``k`` affinely independent points give ``affine_rank == k``. Equal to
    the rank of the points with a constant 1 appended (homogenization).
    """
    if not points:
        raise ValueError("affine_rank of an empty point set")
    _check_rect(points)
    return rank([[1] + list(p) for p in points])


def affinely_independent_subset(points: Sequence[Sequence[Number]], prefer: Sequence[int] = ()) -> list[int]:
    """Indices of a maximal affinely independent subset.

    Greedy: ``prefer`` indices are tried first, then the rest in order.
    """
    if not points:
        return []
    order = list(dict.fromkeys(list(prefer) + list(range(len(points)))))
    chosen = [order[0]]
    base = [Fraction(v) for v in points[order[0]]]
    basis: list[list[Fraction]] = []  # reduced difference rows, echelon by pivot
    pivcols: list[int] = []
    for idx in order[1:]:
        vec = [Fraction(v) - b for v, b in zip(points[idx], base)]
        for row, pc in zip(basis, pivcols):
            f = vec[pc]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        pc = next((k for k, v in enumerate(vec) if v), None)
        if pc is None:
            continue
        piv = vec[pc]
        vec = [v / piv for v in vec]
        basis.append(vec)
        pivcols.append(pc)
        chosen.append(idx)
    return chosen


def solve_linear(A: Sequence[Sequence[Number]], b: Sequence[Number]):
    """Solve ``A z = b`` exactly.

    Returns the solution as a list of Fractions when it is unique, else the
    string ``"inconsistent"`` or ``"underdetermined"``.
    """
    if len(A) != len(b):
        raise ValueError(f"dimension mismatch: A has {len(A)} rows, b has {len(b)} entries")
    ncols = _check_rect(A)
    if ncols == 0:
        if any(Fraction(v) != 0 for v in b):
            return INCONSISTENT
        return []
    rows = [integer_row(list(r) + [v]) for r, v in zip(A, b)]
    rows, pivots = _bareiss_echelon(rows, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return INCONSISTENT
    if len(pivots) < ncols:
        return UNDERDETERMINED
    z = [Fraction(0)] * ncols
    for r in range(ncols - 1, -1, -1):
        row = rows[r]
        acc = Fraction(row[ncols])
        for k in range(r + 1, ncols):
            acc -= row[k] * z[k]
        z[r] = acc / row[r]
    return z
