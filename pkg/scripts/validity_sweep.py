"""Check every family cut on a random corpus against the exact pattern oracle.

    python3 scripts/validity_sweep.py --count 100 --max-m 3 --max-n 3
"""

import argparse
import time
from collections import Counter

from servloc.corpus import CorpusConfig, corpus
from servloc.cuts import all_family_cuts
from servloc.oracle import check_facet, check_valid


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--max-m", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--faces", action="store_true", help="also classify each cut's face (slower)")
    args = parser.parse_args()

    start = time.perf_counter()
    per_family = Counter()
    invalid = []
    faces = Counter()
    for k, inst in enumerate(corpus(CorpusConfig(args.count, args.max_m, args.max_n, args.seed))):
        for cut in all_family_cuts(inst):
            per_family[cut.family] += 1
            if not check_valid(inst, cut).valid:
                invalid.append((k, cut.describe()))
            elif args.faces:
                faces[(cut.family, check_facet(inst, cut).classification)] += 1
    print(f"instances: {args.count}, cuts per family: {dict(per_family)}")
    print(f"invalid cuts: {len(invalid)}")
    for k, text in invalid[:10]:
        print(f"  instance {k}: {text}")
    for (family, cls), count in sorted(faces.items()):
        print(f"  {family:6s} {cls:15s} {count}")
    print(f"elapsed {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
