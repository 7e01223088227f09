"""Distribution of Shearer slack (rhs - k*H) over random tables and covers, per alpha.

    python3 scripts/shearer_slack.py --instances 500 --seed 1
"""

import argparse

import numpy as np

from entrocount.campaign import random_cover, random_table
from entrocount.shearer import check_shearer


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, nargs="+", default=[1.0, 1.5, 2.0, 3.0])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = []
    for _ in range(args.instances):
        t = random_table(rng, min_coords=2)
        cases.append((t, random_cover(rng, t.ndim)))

    print(f"{'alpha':>6}  {'min':>10}  {'median':>10}  {'max':>10}  {'tight(<1e-9)':>12}")
    for a in args.alpha:
        slack = np.array([check_shearer(t, c, a).slack for t, c in cases])
        print(f"{a:>6}  {slack.min():>10.3g}  {np.median(slack):>10.3g}  {slack.max():>10.3g}  "
              f"{int((slack < 1e-9).sum()):>12}")


if __name__ == "__main__":
    main()
