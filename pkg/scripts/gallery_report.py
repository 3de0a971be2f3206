"""Run every gallery fixture and print one row per fixture."""

import argparse

from bjpreserve.gallery import GALLERY, run_gallery


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'fixture':<11} {'shape':<7} {'mutual':<7} {'singular':<9} decompose")
    for name in GALLERY:
        r = run_gallery(name, args.seed, args.trials)
        print(f"{name:<11} {'x'.join(map(str, r['shape'])):<7} {str(r['mutual_preserver']):<7} "
              f"{str(r['singularity_preserver']):<9} {r['decompose']}")
        print(f"{'':<11} {r['note']}")


if __name__ == "__main__":
    main()
