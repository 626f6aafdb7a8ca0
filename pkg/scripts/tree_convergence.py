"""Return probability of the tree walk versus time.

For each degree kappa and case, records P(X_t = 0) at even t alongside the
closed-form limit, so convergence (case B) or decay (case A) can be plotted.

    python3 scripts/tree_convergence.py --kappa 3 4 5 --steps 800 -o tree.csv
"""

import argparse
import csv
import sys

from cmvwalk.limits import p0_limit, tree_coin
from cmvwalk.walk import initial_state, sites_for, step


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--kappa", type=int, nargs="+", default=[3, 4])
    parser.add_argument("--case", choices=("A", "B"), nargs="+", default=["A", "B"])
    parser.add_argument("--steps", type=int, default=600)
    parser.add_argument("--every", type=int, default=20, help="sampling stride (even)")
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args(argv)

    fh = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["kappa", "case", "t", "p0", "p0_limit"])
    for kappa in args.kappa:
        for case in args.case:
            coin, gamma = tree_coin(kappa, case)
            limit = p0_limit(kappa, case)
            state = initial_state(2, sites_for(args.steps))
            for t in range(args.steps + 1):
                if t % args.every == 0:
                    p0 = abs(state.amplitudes[0]) ** 2
                    writer.writerow([kappa, case, t, f"{p0:.12g}", f"{limit:.12g}"])
                if t < args.steps:
                    state = step(state, coin, gamma)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
