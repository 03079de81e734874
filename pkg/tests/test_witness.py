import random
from fractions import Fraction

import pytest

from servloc.cuts import LinearInequality, all_subsets, critical_facet_cut, facet_conditions
from servloc.exactmath import rank
from servloc.formulation import build_lifted, qvar, xvar
from servloc.instance import IndexSubsets, generate_random, make_instance
from servloc.oracle import check_facet
from servloc.oracle.checks import all_vertices
from servloc.witness import (
    WitnessError,
    block_cycle_vectors,
    cycle_difference_vectors,
    extension_points,
    extension_sizes,
    perturbation_family,
)


def test_cycle_three():
    fam = cycle_difference_vectors(3)
    assert list(fam.members["U"]) == [(1, -1, 0), (0, 1, -1), (-1, 0, 1)]
    assert fam.achieved() == 3


def test_cycle_degenerate():
    fam = cycle_difference_vectors(1)
    assert fam.members["U"] == ((0,),) and fam.achieved() == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_cycle_affine_exceeds_linear(n):
    fam = cycle_difference_vectors(n)
    assert fam.achieved() == n
    assert rank(fam.vectors()) == n - 1


@pytest.mark.parametrize("sizes", [(2, 2), (4, 4, 4), (2, 3, 5), (2,), (3,), (2, 2, 2, 2)])
def test_block_cycles(sizes):
    fam = block_cycle_vectors(sizes)
    assert len(fam.vectors()) == sum(sizes)
    assert fam.achieved() == fam.claimed == sum(sizes)


def test_block_cycles_reject_small_blocks():
    with pytest.raises(WitnessError):
        block_cycle_vectors((1, 2))


def random_inputs(l, m, n, seed):
    rng = random.Random(seed)
    while True:
        u = [[rng.randint(-3, 3) for _ in range(l * n)] for _ in range(n)]
        v = [[rng.randint(-3, 3) for _ in range(m * n)] for _ in range(n)]
        up, vp = [rng.randint(-3, 3) for _ in range(l * n)], [rng.randint(-3, 3) for _ in range(m * n)]
        # with l = n = 1 the all-open point must differ from the single base point
        if not (l == n == 1 and (up, vp) == (u[0], v[0])):
            return u, v, up, vp


def test_perturbation_smallest():
    fam = perturbation_family([[4]], [[-1]], [[1]], [2], [5])
    assert fam.claimed == 3 and fam.achieved() == 3


@pytest.mark.parametrize("l,m,n", [(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 2), (1, 1, 3), (2, 1, 3)])
@pytest.mark.parametrize("seed", range(3))
def test_perturbation_grid(l, m, n, seed):
    u, v, up, vp = random_inputs(l, m, n, seed)
    w = [[int(a == b) for b in range(n)] for a in range(n)]
    fam = perturbation_family(u, v, w, up, vp)
    assert fam.achieved() >= fam.claimed == (l + m + 1) * n


def test_perturbation_non_identity_w():
    u, v, up, vp = random_inputs(1, 1, 3, 9)
    w = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    fam = perturbation_family(u, v, w, up, vp)
    assert fam.achieved() >= 9


def test_perturbation_degenerate_single_point_falls_short():
    # l = n = 1 and [u', v'] equal to the base point: Y collapses onto W
    with pytest.raises(WitnessError, match="no eps"):
        perturbation_family([[1]], [[2]], [[1]], [1], [2], max_halvings=4)


def test_perturbation_rejects_dependent_w():
    with pytest.raises(WitnessError, match="independent"):
        perturbation_family([[0, 0]] * 2, [[0, 0]] * 2, [[1, 0], [1, 0]], [0, 0], [0, 0])


def test_perturbation_rejects_non_binary_w():
    with pytest.raises(WitnessError, match="binary"):
        perturbation_family([[0]], [[0]], [[2]], [0], [0])


def test_extension_sizes_add_up():
    for m in range(1, 4):
        for n in range(1, 4):
            for a in range(1, m + 1):
                for b in range(1, n + 1):
                    assert sum(extension_sizes(m, n, a, b).values()) == (2 * m + 1) * n


def tight_face_points(inst, sub, ineq):
    return [p for p in all_vertices(inst, sub) if ineq.lhs(p) == ineq.rhs]


def test_extension_reference_boundary(ref):
    sub = IndexSubsets((0, 1, 2), (0, 1))
    cut = critical_facet_cut(ref, sub.I, sub.J)
    fam = extension_points(ref, sub, tight_face_points(ref, sub, cut), cut)
    assert fam.sizes() == {"V": 14, "V1": 0, "V2": 0, "V3": 0}
    assert fam.achieved() == 14


def face_inequality(inst):
    d = inst.demand[0][0]
    return LinearInequality.build({xvar(0, 0): 1, qvar(0, 0): -d}, 0)


def test_extension_two_by_two():
    inst = make_instance([5, 5], [[2, 1], [1, 2]])
    sub = IndexSubsets((0,), (0,))
    ineq = face_inequality(inst)
    fam = extension_points(inst, sub, tight_face_points(inst, sub, ineq), ineq)
    assert fam.sizes() == {"V": 3, "V1": 3, "V2": 2, "V3": 2}
    assert fam.achieved() == 10
    lifted = build_lifted(inst)
    for label in ("V1", "V2", "V3"):
        for p in fam.points[label]:
            assert lifted.contains(p.values()) and ineq.lhs(p) == ineq.rhs


def test_extension_names_missing_open_location():
    inst = make_instance([5, 5], [[2, 1], [1, 2]])
    sub = IndexSubsets((0,), (0,))
    ineq = face_inequality(inst)
    pts = [p for p in tight_face_points(inst, sub, ineq) if p.y[0] == 0]
    with pytest.raises(WitnessError, match=r"condition \(2\).*j=1"):
        extension_points(inst, sub, pts, ineq)


def test_extension_rejects_points_off_the_plane():
    inst = make_instance([5, 5], [[2, 1], [1, 2]])
    sub = IndexSubsets((0,), (0,))
    ineq = face_inequality(inst)
    pts = all_vertices(inst, sub)
    with pytest.raises(WitnessError, match="hyperplane"):
        extension_points(inst, sub, pts, ineq)


def critical_pairs(inst):
    for I in all_subsets(inst.m):
        for J in all_subsets(inst.n):
            if len(J) >= 2 and (len(I), len(J)) != (inst.m, inst.n) and facet_conditions(inst, I, J).all_hold:
                yield IndexSubsets(I, J)


def test_extension_on_proper_critical_pairs():
    done = 0
    for seed in range(200):
        inst = generate_random(3, 3, seed)
        for sub in critical_pairs(inst):
            cut = critical_facet_cut(inst, sub.I, sub.J)
            fam = extension_points(inst, sub, tight_face_points(inst, sub, cut), cut)
            assert fam.sizes() == extension_sizes(3, 3, len(sub.I), len(sub.J))
            assert fam.achieved() == 21
            done += 1
        if done >= 4:
            break
    assert done >= 4


def test_extension_agrees_with_facet_oracle():
    for seed in range(200):
        inst = generate_random(3, 3, seed)
        subs = list(critical_pairs(inst))
        if subs:
            sub = subs[0]
            cut = critical_facet_cut(inst, sub.I, sub.J)
            rep = check_facet(inst, cut)
            assert (rep.dimension, rep.face_dimension) == (21, 20)
            return
    pytest.fail("no proper critical pair in the seed range")


def test_extension_epsilon_is_rational(ref):
    inst = make_instance([5, 5], [[2, 1], [1, 2]])
    sub = IndexSubsets((0,), (0,))
    ineq = face_inequality(inst)
    fam = extension_points(inst, sub, tight_face_points(inst, sub, ineq), ineq)
    assert isinstance(fam.epsilon, Fraction) and 0 < fam.epsilon <= 1
