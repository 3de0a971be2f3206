"""Degree, leading coefficient and integer roots of p -> det(pF + T).

T is random with an invertible lower-right block and F = I_m1 + 0.  The
columns report how far the leading coefficient is from det(A22) and how many
nonnegative integer roots appear (there should be at most m1).
"""

import argparse

import numpy as np

from bjpreserve.singularity import (
    det_shift_polynomial,
    nonnegative_integer_roots,
    poly_degree,
    shift_instance,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--instances", type=int, default=20)
    args = ap.parse_args()
    print(f"{'m1':>3} {'m2':>3} {'deg ok':>7} {'max rel lead err':>17} {'max roots':>9}")
    for m1 in range(1, args.max_size + 1):
        for m2 in range(1, args.max_size + 1):
            deg_ok, err, roots = 0, 0.0, 0
            for s in range(args.instances):
                T, F = shift_instance(m1, m2, s)
                c = det_shift_polynomial(T, F, m1 + m2)
                lead = np.linalg.det(T.blocks[0][m1:, m1:])
                deg_ok += poly_degree(c) == m1
                err = max(err, abs(c[m1] - lead) / abs(lead))
                roots = max(roots, len(nonnegative_integer_roots(c)))
            print(f"{m1:>3} {m2:>3} {deg_ok:>3}/{args.instances:<3} {err:>17.2e} {roots:>9}")


if __name__ == "__main__":
    main()
