"""Localization phase diagram of the Type II walk over the b-disk.

Writes a CSV grid ``re_b,im_b,localized,atom_mass,p0`` where ``atom_mass``
is M(b) and ``p0`` the limiting return probability M(b)^2.  Points outside
the unit disk are skipped.

    python3 scripts/phase_diagram.py --n 101 -o phase.csv
"""

import argparse
import csv
import sys

import numpy as np

from cmvwalk.limits import localized_II, m_of_b


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--n", type=int, default=81, help="grid points per axis")
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args(argv)

    fh = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(fh)
    writer.writerow(["re_b", "im_b", "localized", "atom_mass", "p0"])
    axis = np.linspace(-1.0, 1.0, args.n)
    for re in axis:
        for im in axis:
            b = complex(re, im)
            if abs(b) >= 1.0:
                continue
            M = m_of_b(b)
            writer.writerow([f"{re:.6g}", f"{im:.6g}", int(localized_II(b)), f"{M:.12g}", f"{M * M:.12g}"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
