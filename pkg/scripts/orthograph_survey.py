"""Sample orthographs for several shapes, print summary statistics and export them.

Diameters are those of the sampled graphs and say nothing definite about the
full orthograph.  They are only useful for comparing shapes and seeds.

    python scripts/orthograph_survey.py --samples 30 --out out/graphs
"""

import argparse
from pathlib import Path

from bjpreserve.core import as_shape, is_invertible
from bjpreserve.orthograph import build_orthograph, components, export_dot, export_json, sampled_diameters


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shapes", default="2;3;1,1;1,2;2,2;1,1,1")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    print(f"{'shape':>7} {'seed':>4} {'V':>4} {'E':>5} {'comps':>5} {'isolated':>8} "
          f"{'inv. isolated':>13} {'max diam':>8}")
    for text in args.shapes.split(";"):
        shape = as_shape(tuple(int(x) for x in text.split(",")))
        for seed in range(args.seeds):
            g = build_orthograph(shape, args.samples, seed)
            deg = g.degrees()
            inv = [v for v, a in enumerate(g.vertices) if is_invertible(a)]
            print(f"{str(shape):>7} {seed:>4} {len(g.vertices):>4} {len(g.edges):>5} {len(components(g)):>5} "
                  f"{sum(d == 0 for d in deg):>8} {sum(deg[v] == 0 for v in inv):>6}/{len(inv):<6} "
                  f"{max(sampled_diameters(g)):>8}")
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                (args.out / f"{g.basename()}.dot").write_text(export_dot(g))
                (args.out / f"{g.basename()}.json").write_text(export_json(g))


if __name__ == "__main__":
    main()
