"""Compare the alpha = 2 ceiling with the Bregman ceiling on the first-row-filled matrix.

For that matrix the alpha = 2 ceiling is n/H_n while Bregman gives (n!)^(1/n),
so the ratio grows roughly like ln n / e.

    python3 scripts/bound_comparison.py --n 5 10 20 50 100 1000
"""

import argparse
import math

from entrocount.bounds import alpha_bound, bregman_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 10, 20, 50, 100, 1000])
    args = ap.parse_args()

    print(f"{'n':>6}  {'alpha=2':>12}  {'n/H_n':>12}  {'bregman':>12}  {'ratio':>8}")
    for n in args.n:
        rows = [n] + [1] * (n - 1)
        a2 = alpha_bound(rows, 2).ceiling
        h = math.fsum(1 / j for j in range(1, n + 1))
        b = bregman_bound(rows)
        print(f"{n:>6}  {a2:>12.6f}  {n / h:>12.6f}  {b:>12.6f}  {b / a2:>8.4f}")


if __name__ == "__main__":
    main()
