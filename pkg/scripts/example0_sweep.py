"""Wu value of the truncated-ball model at the center, swept over eps.

Prints eps, computed value, the closed form and the ball value sqrt(2). The
closed form is 1/sqrt(1 - eps^2) up to eps = 1/sqrt(2); beyond that the ball's
ellipsoid is already minimal and the value is sqrt(2).
"""

import argparse
import math

import numpy as np

from wumetric import GEps, kobayashi_model, wu_form


def closed_form(eps: float) -> float:
    return 1 / math.sqrt(1 - eps**2) if eps <= 1 / math.sqrt(2) else math.sqrt(2)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--eps-min", type=float, default=0.05)
    p.add_argument("--eps-max", type=float, default=0.95)
    p.add_argument("--steps", type=int, default=14)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print("eps,value,closed_form,ball")
    for eps in np.linspace(args.eps_min, args.eps_max, args.steps):
        r = wu_form(kobayashi_model(GEps(float(eps)), [0, 0]), args.tol, args.seed)
        print(f"{eps:.4f},{r([0, 1]):.8f},{closed_form(eps):.8f},{math.sqrt(2):.8f}")


if __name__ == "__main__":
    main()
