"""Scan the Example-1-type field for every eps on a grid and report the usc gap.

The gap is sqrt(2) - 1/sqrt(1 - eps^2) for eps < 1/sqrt(2) and vanishes above.
"""

import argparse
import math

import numpy as np

from wumetric import ex1_field, scan


def expected_gap(eps: float) -> float:
    if eps >= 1 / math.sqrt(2):
        return 0.0
    return math.sqrt(2) - 1 / math.sqrt(1 - eps**2)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--control", action="store_true", help="use the Euclidean value at the origin too")
    args = p.parse_args()
    seq = [(1.0 / k, 0.0) for k in range(1, args.points + 1)]
    print("eps,usc_gap,expected_gap,usc,lsc")
    for eps in np.linspace(0.1, 0.9, args.steps):
        rep = scan(ex1_field(float(eps), args.control), seq, (0, 0), (0, 1), args.tol)
        expected = 0.0 if args.control else expected_gap(float(eps))
        print(f"{eps:.4f},{rep.usc_gap:.8f},{expected:.8f},{rep.usc_violation},{rep.lsc_violation}")


if __name__ == "__main__":
    main()
