"""Lower bounds on the commuting-moment reach of X4 and of random 4x4 matrices.

Prints the three bounds for X4 and a histogram-style summary of which
construction wins on random complex inputs.
"""
import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from unimoments import bounds, correlation, fixtures


@dataclass
class Config:
    trials: int = 200
    n: int = 4
    seed: int = 0


def run(cfg: Config):
    x4 = correlation.validate(fixtures.x4())
    cert = bounds.best_lower_bound(x4)
    print("X4")
    for kind, vals in cert.evidence["candidates"].items():
        print(f"  {kind:15s} c >= {vals['bound_c']:.6f}")
    print(f"  target sqrt2/(1+sqrt2) = {np.sqrt(2) / (1 + np.sqrt(2)):.6f}")
    print(f"  verified: {bounds.verify(x4, cert)['ok']}")

    wins, values = Counter(), []
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.trials):
        x = correlation.random_correlation(cfg.n, rng=rng)
        c = bounds.best_lower_bound(x, certify=False)
        wins[c.evidence["winner"]] += 1
        values.append(c.bound_c)
    print(f"\n{cfg.trials} random complex {cfg.n}x{cfg.n} matrices")
    print(f"  winners: {dict(wins)}")
    print(f"  bound quantiles (0, .5, 1): {np.quantile(values, [0, 0.5, 1]).round(4).tolist()}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--n", type=int, default=Config.n)
    p.add_argument("--seed", type=int, default=Config.seed)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
