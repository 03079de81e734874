"""Root relaxation bound with and without each cut family, against the integer optimum.

    python3 scripts/root_gap.py --count 40 --max-m 3 --max-n 3
"""

import argparse
from fractions import Fraction

from servloc.corpus import CorpusConfig, corpus, opening_costs
from servloc.cuts import FACET, MULTI, SINGLE
from servloc.instance import reference_instance
from servloc.solver import CutConfig, Objective, branch_and_bound, root_lp

CONFIGS = {"facet": (FACET,), "multi": (MULTI,), "single": (SINGLE,), "all": (FACET, MULTI, SINGLE)}


def gap_closed(plain, cut, opt):
    if plain == opt:
        return None
    return (plain - cut) / (plain - opt)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=40)
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ref = reference_instance()
    obj = Objective.revenue_minus_cost(ref, (3, 3))
    opt = branch_and_bound(ref, obj, CutConfig.named("none")).value
    print("reference instance, opening cost 3 per location")
    for name, fams in CONFIGS.items():
        rep = root_lp(ref, obj, CutConfig(families=fams))
        print(f"  {name:6s} root {rep.bound_without_cuts} -> {rep.bound_with_cuts} (optimum {opt})")

    closed = {name: [] for name in CONFIGS}
    with_gap = 0
    for k, inst in enumerate(corpus(CorpusConfig(args.count, args.max_m, args.max_n, args.seed))):
        obj = Objective.revenue_minus_cost(inst, opening_costs(inst, k))
        opt = branch_and_bound(inst, obj, CutConfig.named("none")).value
        plain = root_lp(inst, obj, CutConfig.named("none")).bound_without_cuts
        if plain == opt:
            continue
        with_gap += 1
        for name, fams in CONFIGS.items():
            rep = root_lp(inst, obj, CutConfig(families=fams))
            closed[name].append(gap_closed(plain, rep.bound_with_cuts, opt))
    print(f"corpus: {args.count} instances, {with_gap} with a root gap")
    for name, values in closed.items():
        if values:
            mean = sum(values, Fraction(0)) / len(values)
            full = sum(v == 1 for v in values)
            print(f"  {name:6s} mean gap closed {float(mean):.3f}, fully closed on {full}/{len(values)}")


if __name__ == "__main__":
    main()
