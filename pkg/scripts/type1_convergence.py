"""Convergence of the Type I walk to its closed-form limit distribution.

Averages the simulated distribution over windows [t, t + width] and reports
the sup-distance to the limit on x <= xmax, for a real coin C(a).

    python3 scripts/type1_convergence.py --a 0.6 --times 50 100 200 400 800
"""

import argparse
import csv
import sys

import numpy as np

from cmvwalk.coin import parse_complex, real_coin
from cmvwalk.limits import limit_dist_I
from cmvwalk.walk import initial_state, sites_for, time_average


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--a", default="0.6", help="coin parameter (complex, e.g. 0.3+0.4i)")
    parser.add_argument("--times", type=int, nargs="+", default=[50, 100, 200, 400, 800])
    parser.add_argument("--width", type=int, default=20)
    parser.add_argument("--xmax", type=int, default=4)
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args(argv)

    a = parse_complex(args.a)
    coin = real_coin(a)
    limit = limit_dist_I(a, xmax=args.xmax).p
    fh = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["t", "sup_error", *[f"p{x}" for x in range(args.xmax + 1)]])
    for t in args.times:
        end = t + args.width
        p = time_average(initial_state(1, sites_for(end)), coin, 0.0, range(t, end + 1))[: args.xmax + 1]
        writer.writerow([t, f"{np.abs(p - limit).max():.6e}", *[f"{v:.12g}" for v in p]])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
