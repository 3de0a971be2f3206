"""Compare verify_mutual_preserver with decompose on random surjections.

For each shape, half the maps are canonical and half are canonical plus a
relative perturbation of size --noise.  A disagreement is a map that passes
the verifier but does not decompose, or the other way round.

    python scripts/theorem_equivalence.py --maps 40 --trials 500
"""

import argparse
import time

from bjpreserve.core import as_shape
from bjpreserve.gallery import noisy_map
from bjpreserve.preservers import DecompositionError, decompose, from_canonical, random_canonical, \
    verify_mutual_preserver


def sweep(shape, n_maps, trials, noise, seed):
    counts = {"canonical": [0, 0], "noisy": [0, 0]}  # [verified, decomposed]
    disagree = 0
    for t in range(n_maps):
        m = from_canonical(random_canonical(shape, seed + t))
        kind = "canonical"
        if t % 2:
            m, kind = noisy_map(m, seed + t, noise), "noisy"
        verified = verify_mutual_preserver(m, trials, seed + t) is None
        try:
            decompose(m)
            decomposed = True
        except DecompositionError:
            decomposed = False
        counts[kind][0] += verified
        counts[kind][1] += decomposed
        disagree += verified != decomposed
    return counts, disagree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shapes", default="3;1,3;2,3;2,2,2", help="semicolon separated shapes")
    ap.add_argument("--maps", type=int, default=20)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--noise", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'shape':>8} {'canon ok':>9} {'noisy ok':>9} {'disagree':>9} {'sec':>6}")
    for text in args.shapes.split(";"):
        shape = as_shape(tuple(int(x) for x in text.split(",")))
        t0 = time.perf_counter()
        counts, disagree = sweep(shape, args.maps, args.trials, args.noise, args.seed)
        half_c, half_n = (args.maps + 1) // 2, args.maps // 2
        print(f"{str(shape):>8} {counts['canonical'][0]:>4}/{half_c:<4} {counts['noisy'][0]:>4}/{half_n:<4} "
              f"{disagree:>9} {time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
