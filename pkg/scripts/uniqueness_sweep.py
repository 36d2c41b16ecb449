"""Certify many random admissible weight vectors and tabulate the verdicts.

    python3 scripts/uniqueness_sweep.py --trials 200 --max-n 12
"""
import argparse
import collections
import time

import numpy as np

from lefcert.certifier import certify
from lefcert.dfmap import DfMap
from lefcert.simplex import random_weights
from lefcert.solver import SolverConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--min-n", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--starts", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    verdicts = collections.Counter()
    radii = []
    t0 = time.perf_counter()
    for k in range(args.trials):
        n = int(rng.integers(args.min_n, args.max_n + 1))
        m = DfMap(random_weights(n, rng))
        cert = certify(m, SolverConfig(seed=k, multistart_count=args.starts))
        verdicts[cert.verdict.value] += 1
        radii += [rep.spectral_radius for _, rep in cert.interior_points]
        if cert.verdict.value != "UniqueExpStable":
            print(f"trial {k}: n={n} gamma={m.gamma.tolist()} -> {cert.verdict.value} {cert.notes}")
    elapsed = time.perf_counter() - t0

    print(f"{args.trials} trials in {elapsed:.1f}s")
    for v, c in sorted(verdicts.items()):
        print(f"  {v:16s} {c}")
    if radii:
        print(f"spectral radius: min {min(radii):.4f}  median {np.median(radii):.4f}  max {max(radii):.4f}")


if __name__ == "__main__":
    main()
