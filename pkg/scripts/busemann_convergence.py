"""Error of the sampled Busemann gauge against a known norm as the sample grows."""

import argparse
import time

import numpy as np

from wumetric import GEps, busemann_seminorm, kobayashi_model
from wumetric.hermitian import complex_gaussian


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--queries", type=int, default=2000)
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    h = kobayashi_model(GEps(args.eps), [0, 0])
    X = complex_gaussian(np.random.default_rng([args.seed, 7]), (args.queries, 2))
    exact = h.eval_many(X)
    print("directions,max_rel_error,seconds")
    for d in (250, 500, 1000, 2000, 4000):
        t = time.perf_counter()
        b = busemann_seminorm(h, d, args.seed, refine=args.refine)
        err = float(np.max(np.abs(b.eval_many(X) - exact) / exact))
        print(f"{d},{err:.5f},{time.perf_counter() - t:.2f}")


if __name__ == "__main__":
    main()
