from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from servloc.formulation import (
    PointXYQ,
    all_variables,
    attracted_demand,
    build_lifted,
    fix_binary,
    lift_q,
    max_attraction_region,
    qvar,
    restrict_subsets,
    variable_index,
    xvar,
    yvar,
)
from servloc.instance import IndexSubsets, generate_random, make_instance
from servloc.oracle import enumerate_vertices, lp_maximize


def test_attracted_demand_reference(ref):
    assert attracted_demand(ref, (1, 0)) == (2, 2, 1)
    assert attracted_demand(ref, (0, 0)) == (0, 0, 0)
    assert attracted_demand(ref, (1, 1)) == (2, 2, 2)


@given(st.integers(0, 500), st.integers(1, 3), st.integers(1, 3), st.data())
def test_attracted_demand_monotone_in_open_set(seed, m, n, data):
    inst = generate_random(m, n, seed)
    y = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    j = data.draw(st.integers(0, n - 1))
    more = list(y)
    more[j] = 1
    before, after = attracted_demand(inst, y), attracted_demand(inst, more)
    assert all(a <= b for a, b in zip(before, after))
    assert all(b <= max(inst.demand[i]) for i, b in enumerate(after))


def test_attracted_demand_rejects_non_binary(ref):
    with pytest.raises(ValueError):
        attracted_demand(ref, (1, 2))
    with pytest.raises(ValueError):
        attracted_demand(ref, (1,))


def test_lifted_row_counts(ref):
    sys = build_lifted(ref)
    assert len(sys.rows) == 14 and len(sys.variables) == 14
    assert Counter(r.tag for r in sys.rows) == {"capacity": 2, "demand-link": 3, "q-sum": 3, "q-bound": 6}
    small = build_lifted(make_instance([2], [[3]]))
    assert len(small.rows) == 4 and len(small.variables) == 3


def test_variable_catalog_order():
    vs = all_variables(2, 2)
    assert [str(v) for v in vs[:4]] == ["x_1_1", "x_1_2", "x_2_1", "x_2_2"]
    assert [str(v) for v in vs[4:6]] == ["y_1", "y_2"]
    assert variable_index(2, 2, qvar(1, 0)) == 8


def test_fix_binary_closed_slice_is_origin(ref):
    vs = enumerate_vertices(fix_binary(build_lifted(ref), (0, 0)))
    assert [p.as_vector() for p in vs] == [PointXYQ.zeros(3, 2).as_vector()]


def test_fix_binary_single_location_region():
    inst = make_instance([2], [[3]])
    sl = fix_binary(build_lifted(inst), (1,))
    assert sl.contains({xvar(0, 0): 2, qvar(0, 0): 1, yvar(0): 1})
    assert sl.contains({xvar(0, 0): 2, qvar(0, 0): Fraction(2, 3), yvar(0): 1})
    assert not sl.contains({xvar(0, 0): 2, qvar(0, 0): Fraction(1, 2), yvar(0): 1})
    assert not sl.contains({xvar(0, 0): Fraction(5, 2), qvar(0, 0): 1, yvar(0): 1})


def test_fix_binary_capacity_binds(ref):
    sys = fix_binary(build_lifted(ref), (1, 0))
    value, _ = lp_maximize(sys, {xvar(i, j): 1 for i in range(3) for j in range(2)})
    assert value == 4


def test_restrict_full_subsets_is_identity(ref):
    sys = build_lifted(ref)
    full = restrict_subsets(sys, IndexSubsets((0, 1, 2), (0, 1)))
    for y in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        a = enumerate_vertices(fix_binary(sys, y)).vectors()
        b = enumerate_vertices(fix_binary(full, y)).vectors()
        assert a == b


def test_restrict_single_pair_leaves_three_free(ref):
    sys = restrict_subsets(build_lifted(ref), IndexSubsets((0,), (0,)))
    sl = fix_binary(sys, (1, 0))
    pts = enumerate_vertices(sl)
    moving = {k for p in pts for k, v in enumerate(p.as_vector()) if v != 0}
    names = {str(all_variables(3, 2)[k]) for k in moving}
    assert names <= {"x_1_1", "q_1_1", "y_1"}


def test_lift_q_selects_argmax_with_low_index_ties(ref):
    q = lift_q(ref, (1, 1))
    assert q[1] == (1, 0)  # d_21 = d_22 = 2, tie to the first location
    assert q[2] == (0, 1)
    assert lift_q(ref, (0, 0)) == ((0, 0),) * 3


def test_max_attraction_region_bounds(ref):
    region = max_attraction_region(ref, (1, 1))
    value, _ = lp_maximize(region, {xvar(i, j): 1 for i in range(3) for j in range(2)})
    assert value == 6


def test_point_vector_round_trip():
    p = PointXYQ.from_vector(2, 1, [1, 2, 3, 4, 5])
    assert p.as_vector() == (1, 2, 3, 4, 5)
    assert p[xvar(1, 0)] == 2 and p[yvar(0)] == 3 and p[qvar(1, 0)] == 5
    assert p.perturbed({yvar(0): Fraction(1, 2)}).y == (Fraction(7, 2),)


def test_system_rejects_unknown_variable(ref):
    sys = fix_binary(build_lifted(ref), (1, 1))
    with pytest.raises(ValueError):
        sys.fix({yvar(0): 1})


def test_dump_is_stable(ref):
    assert build_lifted(ref).dumps() == build_lifted(ref).dumps()
