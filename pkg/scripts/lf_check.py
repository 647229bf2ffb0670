"""Sweep the numeric Laguerre-Forsyth reduction over random complex (c2, c0)."""

import argparse
import cmath
import random

from legendrian235.ode4 import numeric_lf_reduce


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--order", type=int, default=6)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst = 0.0
    for _ in range(args.cases):
        c2 = cmath.rect(rng.uniform(1, 10), rng.uniform(-cmath.pi, cmath.pi))
        c0 = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        ts = sorted(rng.uniform(0.05, 0.9) for _ in range(5))
        rep = numeric_lf_reduce(c2, c0, ts, order=args.order)
        worst = max(worst, rep.max_residual)
    print(f"{args.cases} cases, worst residual {worst:.3e}")


if __name__ == "__main__":
    main()
