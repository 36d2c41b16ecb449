"""Compare observed tail contraction with the spectral radius at the fixed point.

Weights approaching the star boundary (largest entry -> 1/2) are included to
show the rate degrading as the fixed point moves toward a corner.
"""
import argparse

import numpy as np

from lefcert.certifier import certify, rate_estimate
from lefcert.dfmap import DfMap
from lefcert.simplex import InfluenceWeights, barycenter
from lefcert.solver import SolverConfig


def near_star(n, top):
    g = np.full(n, (1.0 - top) / (n - 1))
    g[0] = top
    return InfluenceWeights(g)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--tops", type=float, nargs="+", default=[0.3, 0.4, 0.45, 0.49, 0.499])
    args = ap.parse_args()

    print(f"{'gamma_1':>8} {'x_1':>10} {'spectral':>10} {'empirical':>10} {'gap':>9} {'tail':>5}")
    for top in args.tops:
        m = DfMap(near_star(args.n, top))
        cert = certify(m, SolverConfig(multistart_count=10))
        xbar = cert.interior_points[0][0].location
        est = rate_estimate(m, xbar, barycenter(args.n), args.steps)
        print(f"{top:8.3f} {xbar.coords[0]:10.6f} {est.spectral_rate:10.6f} "
              f"{est.empirical_rate:10.6f} {est.relative_gap:9.2e} {est.tail_window:5d}")


if __name__ == "__main__":
    main()
