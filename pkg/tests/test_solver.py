from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from servloc.corpus import opening_costs
from servloc.cuts import FACET
from servloc.formulation import build_lifted
from servloc.instance import generate_random, make_instance
from servloc.solver import (
    CutConfig,
    Objective,
    SolverGuardError,
    branch_and_bound,
    pattern_optimum,
    root_lp,
)

NO_CUTS = CutConfig.named("none")
FACET_ONLY = CutConfig.named("facet-only")


@pytest.fixture
def costly(ref):
    return Objective.revenue_minus_cost(ref, (3, 3))


def test_root_bound_without_cuts(ref, costly):
    rep = root_lp(ref, costly, NO_CUTS)
    assert rep.bound_without_cuts == rep.bound_with_cuts == Fraction(4, 3)
    assert rep.point_without_cuts.y == (1, Fraction(1, 3))


def test_root_bound_with_facet_cut(ref, costly):
    rep = root_lp(ref, costly, FACET_ONLY)
    assert rep.bound_without_cuts == Fraction(4, 3)
    assert rep.bound_with_cuts == 1
    assert [c.family for c in rep.cuts] == [FACET]


def test_root_bound_no_gap_without_costs(ref):
    rep = root_lp(ref, Objective.revenue_minus_cost(ref, (0, 0)))
    assert rep.bound_without_cuts == 6 and rep.point_without_cuts.y == (1, 1)


@pytest.mark.parametrize("config", [NO_CUTS, FACET_ONLY, CutConfig(), CutConfig(mode="greedy")])
def test_reference_optimum(ref, costly, config):
    rep = branch_and_bound(ref, costly, config)
    assert rep.value == 1 and rep.y == (0, 1)
    assert rep.root_bound_without_cuts == Fraction(4, 3)
    assert rep.value <= rep.root_bound_with_cuts <= rep.root_bound_without_cuts


def test_reference_optimum_free_opening(ref):
    rep = branch_and_bound(ref, Objective.revenue_minus_cost(ref, (0, 0)))
    assert rep.value == 6 and rep.y == (1, 1)


def test_incumbent_is_feasible_and_scores_value(ref, costly):
    rep = branch_and_bound(ref, costly)
    assert build_lifted(ref).contains(rep.point.values())
    assert costly.value(rep.point) == rep.value


def test_cuts_shrink_tree(ref, costly):
    assert branch_and_bound(ref, costly).nodes <= branch_and_bound(ref, costly, NO_CUTS).nodes


def test_pattern_oracle_reference(ref, costly):
    assert pattern_optimum(ref, costly) == (1, (0, 1))


def test_everything_closed_is_optimal_when_costly():
    inst = make_instance([2], [[1]])
    rep = branch_and_bound(inst, Objective.revenue_minus_cost(inst, (5,)))
    assert rep.value == 0 and rep.y == (0,)


def test_guard():
    with pytest.raises(SolverGuardError):
        branch_and_bound(generate_random(1, 17, 0))


def test_objective_rejects_wrong_cost_length(ref):
    with pytest.raises(ValueError):
        Objective.revenue_minus_cost(ref, (1,))


def test_unknown_preset():
    with pytest.raises(ValueError):
        CutConfig.named("some")


@settings(max_examples=25)
@given(st.integers(0, 500), st.integers(1, 3), st.integers(1, 3))
def test_matches_pattern_oracle_and_cuts_are_harmless(seed, m, n):
    inst = generate_random(m, n, seed)
    obj = Objective.revenue_minus_cost(inst, opening_costs(inst, seed))
    plain = branch_and_bound(inst, obj, NO_CUTS)
    cut = branch_and_bound(inst, obj)
    assert (plain.value, plain.y) == (cut.value, cut.y) == pattern_optimum(inst, obj)
    assert cut.root_bound_with_cuts <= cut.root_bound_without_cuts
