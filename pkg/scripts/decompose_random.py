"""Extreme-point peeling statistics on random correlation matrices."""
import argparse
import time
from dataclasses import dataclass

import numpy as np

from unimoments import correlation, extremality


@dataclass
class Config:
    dims: tuple = (3, 4, 5, 6)
    trials: int = 100
    real: bool = False
    seed: int = 0


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    mode = "real" if cfg.real else "complex"
    print(f"{mode} mode, {cfg.trials} trials per n")
    print(" n  terms(mean/max)  leaf ranks        max error   sec")
    for n in cfg.dims:
        counts, ranks, err = [], set(), 0.0
        start = time.perf_counter()
        for _ in range(cfg.trials):
            x = correlation.random_correlation(n, real=cfg.real, rng=rng)
            dec = extremality.decompose_extreme(x, cfg.real)
            counts.append(len(dec))
            ranks.update(correlation.rank(leaf) for _, leaf in dec.terms)
            err = max(err, float(np.abs(dec.matrix() - x.entries).max()))
        sec = time.perf_counter() - start
        print(f"{n:2d}  {np.mean(counts):6.2f} / {max(counts):3d}     {str(sorted(ranks)):16s}  {err:.1e}  {sec:5.2f}")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dims", type=int, nargs="+", default=list(Config.dims))
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--real", action="store_true")
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    run(Config(tuple(a.dims), a.trials, a.real, a.seed))


if __name__ == "__main__":
    main()
