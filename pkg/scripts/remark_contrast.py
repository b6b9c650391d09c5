"""Normalized versus unnormalized Wu values along a rank-dropping product field."""

import argparse

from wumetric import remark_field, scan


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=int, default=2, help="dimension of the first factor")
    p.add_argument("--rank", type=int, default=1, help="rank of the first factor along the sequence")
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-6)
    args = p.parse_args()
    field = remark_field(args.k, args.rank)
    n = args.k + 1
    seq = [[1.0 / j] + [0.0] * (n - 1) for j in range(1, args.points + 1)]
    X = [0.0] * (n - 1) + [1.0]
    for normalized in (False, True):
        rep = scan(field, seq, [0.0] * n, X, args.tol, normalized=normalized)
        label = "normalized" if normalized else "unnormalized"
        print(f"{label}: tail value^2={rep.values[-1] ** 2:.6f} limit^2={rep.limit_value ** 2:.6f} "
              f"usc={rep.usc_violation} lsc={rep.lsc_violation}")


if __name__ == "__main__":
    main()
