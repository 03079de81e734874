import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from servloc.exactmath import (
    INCONSISTENT,
    UNDERDETERMINED,
    affine_rank,
    affinely_independent_subset,
    as_rational,
    format_rational,
    integer_row,
    primitive,
    rank,
    solve_linear,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(fractions, min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def transpose(M):
    return [list(col) for col in zip(*M)]


def test_as_rational_accepts_exact_forms():
    assert as_rational(3) == 3
    assert as_rational("6/4") == Fraction(3, 2)
    assert as_rational(" -2/3 ") == Fraction(-2, 3)
    assert as_rational(Fraction(1, 7)) == Fraction(1, 7)


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "1/-2", "abc", None])
def test_as_rational_refuses_inexact(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rational(bad)


@given(fractions)
def test_format_round_trip(v):
    assert as_rational(format_rational(v)) == v


def test_integer_row_and_primitive():
    assert integer_row([Fraction(1, 2), Fraction(2, 3), 1]) == [3, 4, 6]
    assert primitive([4, -6, 8]) == (2, -3, 4)
    assert primitive([0, 0]) == (0, 0)


def test_rank_small_cases():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[0, 0, 0]]) == 0


@given(matrices())
def test_rank_equals_transpose_rank(M):
    assert rank(M) == rank(transpose(M))


@given(matrices(), st.integers(0, 10**6))
def test_rank_invariant_under_row_permutation(M, seed):
    P = list(M)
    random.Random(seed).shuffle(P)
    assert rank(P) == rank(M)


@given(matrices(max_rows=6), st.lists(fractions, min_size=5, max_size=5))
def test_affine_rank_translation_invariant(M, shift):
    t = shift[: len(M[0])]
    moved = [[a + b for a, b in zip(row, t)] for row in M]
    assert affine_rank(moved) == affine_rank(M)


@given(matrices(max_rows=6), st.integers(0, 10**6))
def test_affine_rank_permutation_invariant(M, seed):
    P = list(M)
    random.Random(seed).shuffle(P)
    assert affine_rank(P) == affine_rank(M)


@given(matrices(max_rows=6))
def test_affine_rank_bounds(M):
    r = affine_rank(M)
    assert 1 <= r <= min(len(M), len(M[0]) + 1)
    assert rank(M) <= r <= rank(M) + 1


def test_affine_rank_examples():
    assert affine_rank([[0, 0], [1, 0], [0, 1]]) == 3
    assert affine_rank([[1, 1], [2, 2], [3, 3]]) == 2
    with pytest.raises(ValueError):
        affine_rank([])


def test_independent_subset_prefers_given_indices():
    pts = [[0, 0], [1, 0], [2, 0], [0, 1]]
    chosen = affinely_independent_subset(pts, prefer=[2])
    assert chosen[0] == 2
    assert affine_rank([pts[k] for k in chosen]) == len(chosen) == 3


def test_solve_linear_outcomes():
    assert solve_linear([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve_linear([[1, 1], [2, 2]], [1, 3]) == INCONSISTENT
    assert solve_linear([[1, 1], [2, 2]], [1, 2]) == UNDERDETERMINED
    with pytest.raises(ValueError, match="dimension mismatch"):
        solve_linear([[1, 0]], [1, 2])


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(
    st.lists(st.lists(fractions, min_size=k, max_size=k), min_size=k, max_size=k),
    st.lists(fractions, min_size=k, max_size=k),
)))
def test_solve_linear_solutions_satisfy_system(data):
    A, z = data
    b = [sum(a * v for a, v in zip(row, z)) for row in A]
    sol = solve_linear(A, b)
    if rank(A) == len(A):
        assert sol == z
    else:
        assert sol == UNDERDETERMINED
