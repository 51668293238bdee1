"""Dispersions and bound ratios of random uniform spectra as the number of
levels grows.

For large spectra the ratio tau_TEUR : tau_ML : tau_C should settle near
sqrt(3) : 1 : 4/(pi A) and the excess kurtosis near -6/5.
"""

import argparse
import math
from dataclasses import dataclass, field

from qspeed import compute_constants
from qspeed.catalog import mc_dispersion_study


@dataclass
class Config:
    levels: list = field(default_factory=lambda: [10, 100, 1000, 10000])
    trials: int = 100
    a: float = 0.0
    b: float = 1.0
    seed: int = 0


def main(cfg: Config) -> None:
    A = compute_constants().A
    print(f"# seed={cfg.seed} trials={cfg.trials} interval=[{cfg.a}, {cfg.b}]")
    print(f"# limits: teur/ml={math.sqrt(3):.4f} c/ml={4 / (math.pi * A):.4f} kurtosis=-1.2")
    print(f"{'levels':>7} {'std':>8} {'E-E0':>8} {'AADM':>8} {'kurt':>8} {'teur/ml':>8} {'c/ml':>8}")
    for n in cfg.levels:
        s = mc_dispersion_study(cfg.a, cfg.b, n, cfg.trials, cfg.seed)
        vals = [s.std_dev, s.above_ground, s.aadm, s.excess_kurtosis, s.teur_over_ml, s.c_over_ml]
        print(f"{n:>7} " + " ".join(f"{v.mean:>8.4f}" for v in vals))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--levels", type=int, nargs="+", default=Config().levels)
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--a", type=float, default=Config.a)
    p.add_argument("--b", type=float, default=Config.b)
    p.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(p.parse_args())))
