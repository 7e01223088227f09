"""Scan the permanent ceiling over alpha for a few matrices, including alpha < 1.

Prints the optimizer's choice and, with --trace, every evaluated point.

    python3 scripts/alpha_scan.py --n 8 --seed 3 --random 4 --trace
"""

import argparse

import numpy as np

from entrocount.bounds import alpha_bound, bregman_bound, optimize_alpha
from entrocount.campaign import random_matrix
from entrocount.permanent import BinaryMatrix, permanent_ryser


def matrices(args):
    yield "first-row-filled", BinaryMatrix.first_row_filled(args.n)
    yield "all-ones", BinaryMatrix.ones(args.n)
    band = [[1 if abs(i - j) <= 1 else 0 for j in range(args.n)] for i in range(args.n)]
    yield "tridiagonal", BinaryMatrix.from_rows(band)
    rng = np.random.default_rng(args.seed)
    made = 0
    while made < args.random:
        m = random_matrix(rng, args.n, args.density)
        if m.n == args.n and 0 not in m.row_sums:
            made += 1
            yield f"random#{made}", m


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--random", type=int, default=3)
    ap.add_argument("--density", type=float, default=0.6)
    ap.add_argument("--trace", action="store_true")
    args = ap.parse_args()

    print(f"{'matrix':>18}  {'per':>8}  {'bregman':>10}  {'alpha=2':>10}  {'best':>10}  {'at alpha':>9}")
    for name, m in matrices(args):
        res = optimize_alpha(m)
        print(f"{name:>18}  {permanent_ryser(m):>8}  {bregman_bound(m.row_sums):>10.4f}  "
              f"{alpha_bound(m, 2).ceiling:>10.4f}  {res.best_ceiling:>10.4f}  {res.best_alpha.value:>9.4f}")
        if args.trace:
            for a, c in sorted(res.trace):
                print(f"{'':>20}alpha={a:.5f}  ceiling={c:.6g}")


if __name__ == "__main__":
    main()
