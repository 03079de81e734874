"""Executable vector constructions that certify affine-independence counts.

Each constructor returns a :class:`VectorFamily` whose achieved affine
rank can be compared with the count its construction promises. The
perturbation constructions search for a small enough ``eps`` by halving
from 1; with exact arithmetic every trial is decisive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cuts import LinearInequality
from .exactmath import affine_rank, affinely_independent_subset, rank
from .formulation import PointXYQ, build_lifted, qvar, restrict_subsets, xvar, yvar
from .instance import IndexSubsets, Instance

MAX_HALVINGS = 64


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class VectorFamily:
    members: dict  # label -> tuple of vectors (tuples of Fractions)
    claimed: int
    epsilon: Optional[Fraction] = None
    points: dict = field(default_factory=dict)  # label -> tuple of PointXYQ, when applicable

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [v for label in self.members for v in self.members[label]]

    def achieved(self) -> int:
        vecs = self.vectors()
        return affine_rank(vecs) if vecs else 0

    def sizes(self) -> dict:
        return {label: len(vs) for label, vs in self.members.items()}


def _unit(dim: int, k: int, scale=1) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[k] = Fraction(scale)
    return v


def cycle_difference_vectors(n: int) -> VectorFamily:
    """``e_i - e_{i+1}`` for ``i = 1..n`` with ``n + 1`` wrapping to 1."""
    if n < 1:
        raise WitnessError("n must be at least 1")
    vecs = []
    for i in range(n):
        v = _unit(n, i)
        v[(i + 1) % n] -= 1
        vecs.append(tuple(v))
    return VectorFamily({"U": tuple(vecs)}, n)


def block_cycle_vectors(sizes: Sequence[int]) -> VectorFamily:
    """Within-block difference chains plus one cross-block cycle.

    Block ``l`` contributes ``e_i - e_{i+1}`` for ``i < n_l``; the cycle adds
    ``e_1`` of block ``i`` minus ``e_1`` of block ``i + 1`` (wrapping).
    """
    sizes = list(sizes)
    if not sizes:
        raise WitnessError("need at least one block")
    if any(s < 2 for s in sizes):
        raise WitnessError("every block size must be at least 2")
    N = sum(sizes)
    offsets = [sum(sizes[:l]) for l in range(len(sizes))]
    members = {}
    for l, (off, s) in enumerate(zip(offsets, sizes)):
        chain = []
        for i in range(s - 1):
            v = _unit(N, off + i)
            v[off + i + 1] -= 1
            chain.append(tuple(v))
        members[f"U{l + 1}"] = tuple(chain)
    k = len(sizes)
    cyc = []
    for l in range(k):
        v = _unit(N, offsets[l])
        v[offsets[(l + 1) % k]] -= 1
        cyc.append(tuple(v))
    members["V"] = tuple(cyc)
    return VectorFamily(members, N)


def _is_binary(vec) -> bool:
    return all(Fraction(v) in (0, 1) for v in vec)


def perturbation_family(u, v, w, u_prime, v_prime, eps=Fraction(1), max_halvings: int = MAX_HALVINGS) -> VectorFamily:
    """Perturbed copies of ``n`` base points ``[u^k, v^k, w^k]`` plus an all-open point.

    ``u`` holds ``n`` vectors of length ``l*n``, ``v`` holds ``n`` vectors of
    length ``m*n`` (both row-major, entry ``(i, j)`` at ``i*n + j``) and ``w``
    holds ``n`` linearly independent binary vectors of length ``n``. The
    union of the sets U^k, V^k, Y and W should contain ``(l+m+1)n``
    affinely independent vectors for all small ``eps``.
    """
    n = len(w)
    if n < 1:
        raise WitnessError("need at least one w vector")
    if len(u) != n or len(v) != n:
        raise WitnessError("u, v and w must each hold n vectors")
    if any(len(wk) != n for wk in w):
        raise WitnessError("w vectors must have length n")
    if not all(_is_binary(wk) for wk in w):
        raise WitnessError("w vectors must be binary")
    if rank(w) != n:
        raise WitnessError("w vectors must be linearly independent")
    if len(u[0]) % n or len(v[0]) % n:
        raise WitnessError("u and v lengths must be multiples of n")
    l, m = len(u[0]) // n, len(v[0]) // n
    if l < 1 or m < 1:
        raise WitnessError("l and m must be positive")
    dim = (l + m + 1) * n
    claimed = (l + m + 1) * n

    def base(uk, vk, wk):
        return [Fraction(a) for a in uk] + [Fraction(a) for a in vk] + [Fraction(a) for a in wk]

    def uidx(i, j):
        return i * n + j

    def vidx(i, j):
        return l * n + i * n + j

    eps = Fraction(eps)
    if eps <= 0:
        raise WitnessError("eps must be positive")
    for _ in range(max_halvings + 1):
        U, V, Y, W = [], [], [], []
        for k in range(n):
            b = base(u[k], v[k], w[k])
            Jk = [j for j in range(n) if w[k][j] == 1]
            for i in range(l):
                for ip in range(l):
                    if i == ip:
                        continue
                    for j in Jk:
                        p = list(b)
                        p[uidx(i, j)] += eps
                        p[uidx(ip, j)] -= eps
                        U.append(tuple(p))
            for i in range(m):
                for j in Jk:
                    p = list(b)
                    p[vidx(i, j)] += eps
                    V.append(tuple(p))
            W.append(tuple(b))
        ones = [1] * n
        b = base(u_prime, v_prime, ones)
        for j in range(n):
            p = list(b)
            p[uidx(0, j)] += eps
            p[uidx(0, (j + 1) % n)] -= eps
            Y.append(tuple(p))
        fam = VectorFamily({"U": tuple(U), "V": tuple(V), "Y": tuple(Y), "W": tuple(W)}, claimed, eps)
        assert all(len(p) == dim for p in fam.vectors())
        if fam.achieved() >= claimed:
            return fam
        eps /= 2
    raise WitnessError(f"no eps down to 2^-{max_halvings} reached {claimed} affinely independent vectors")


def _check_extension_conditions(inst: Instance, sub: IndexSubsets, V: Sequence[PointXYQ], ineq: LinearInequality):
    face = restrict_subsets(build_lifted(inst), sub)
    for k, p in enumerate(V):
        if not face.contains(p.values()):
            raise WitnessError(f"point {k} of V is not a binary point of the restricted face")
        if ineq.lhs(p) != ineq.rhs:
            raise WitnessError(f"point {k} of V is not on the hyperplane")
    open_witness = {}
    for j in sub.J:
        k = next(
            (k for k, p in enumerate(V) if p.y[j] == 1 and sum(p.x[i][j] for i in sub.I) < inst.capacity[j]),
            None,
        )
        if k is None:
            raise WitnessError(f"condition (2) unmet for location j={j + 1}: no point opens it with spare capacity")
        open_witness[j] = k
    slack_witness = {}
    for i in sub.I:
        k = next((k for k, p in enumerate(V) if sum(p.q[i][j] for j in sub.J) < 1), None)
        if k is None:
            raise WitnessError(f"condition (3) unmet for site i={i + 1}: every point saturates its q-sum")
        slack_witness[i] = k
    return open_witness, slack_witness


def extension_points(
    inst: Instance,
    sub: IndexSubsets,
    V: Sequence[PointXYQ],
    ineq: LinearInequality,
    eps=Fraction(1),
    max_halvings: int = MAX_HALVINGS,
) -> VectorFamily:
    """Extend a tight, affinely independent set of the face for ``(I, J)`` to the full polytope.

    ``V`` may contain more points than needed; an affinely independent
    subset of size ``(2|I|+1)|J|`` is selected, keeping the points that
    witness conditions (2) and (3). The three perturbation families are
    then built with ``eps`` and ``eps' = eps**2``.
    """
    sub.check(inst)
    m, n = inst.m, inst.n
    I, J = sub.I, sub.J
    outI = [i for i in range(m) if i not in I]
    outJ = [j for j in range(n) if j not in J]
    open_w, slack_w = _check_extension_conditions(inst, sub, V, ineq)
    need = (2 * len(I) + 1) * len(J)
    prefer = list(dict.fromkeys(list(open_w.values()) + list(slack_w.values())))
    chosen = affinely_independent_subset([p.as_vector() for p in V], prefer)
    if len(chosen) < need:
        raise WitnessError(f"V holds only {len(chosen)} affinely independent points, need {need}")
    chosen = chosen[:need]
    if affine_rank([V[k].as_vector() for k in chosen]) != need:
        # the preferred prefix may not extend; fall back to a plain greedy pick
        chosen = affinely_independent_subset([p.as_vector() for p in V])[:need]
    Vsel = [V[k] for k in chosen]
    base = Vsel[0]
    lifted = build_lifted(inst)
    target = (2 * m + 1) * n
    eps = Fraction(eps)
    for _ in range(max_halvings + 1):
        epsp = eps * eps
        V1, V2, V3 = [], [], []
        for j in outJ:
            V1.append(base.perturbed({yvar(j): 1}))
        for i in outI:
            for j in outJ:
                V1.append(base.perturbed({yvar(j): 1, qvar(i, j): 1}))
        for i in outI:
            for j in outJ:
                V1.append(base.perturbed({xvar(i, j): eps, yvar(j): 1, qvar(i, j): 1}))
        for j in J:
            pj = V[open_w[j]]
            for i in outI:
                V2.append(pj.perturbed({qvar(i, j): 1}))
            for i in outI:
                V2.append(pj.perturbed({xvar(i, j): eps, qvar(i, j): 1}))
        for i in I:
            pi = V[slack_w[i]]
            for j in outJ:
                V3.append(pi.perturbed({yvar(j): 1, qvar(i, j): eps}))
            for j in outJ:
                V3.append(pi.perturbed({xvar(i, j): epsp, yvar(j): 1, qvar(i, j): eps}))
        extra = V1 + V2 + V3
        ok = all(lifted.contains(p.values()) and ineq.lhs(p) == ineq.rhs for p in extra)
        if ok:
            fam = VectorFamily(
                {
                    "V": tuple(p.as_vector() for p in Vsel),
                    "V1": tuple(p.as_vector() for p in V1),
                    "V2": tuple(p.as_vector() for p in V2),
                    "V3": tuple(p.as_vector() for p in V3),
                },
                target,
                eps,
                {"V": tuple(Vsel), "V1": tuple(V1), "V2": tuple(V2), "V3": tuple(V3)},
            )
            if fam.achieved() == target:
                return fam
        eps /= 2
    raise WitnessError(f"no eps down to 2^-{max_halvings} produced {target} affinely independent tight points")


def extension_sizes(m: int, n: int, nI: int, nJ: int) -> dict:
    """Sizes of the three extension families and of ``V``; they add up to ``(2m+1)n``."""
    return {
        "V": (2 * nI + 1) * nJ,
        "V1": (2 * m - 2 * nI + 1) * (n - nJ),
        "V2": 2 * (m - nI) * nJ,
        "V3": 2 * nI * (n - nJ),
    }
