"""Check that the three-level family built to saturate the AADM bound
actually reaches fidelity eps at tau_C, for a grid of eps."""

import argparse
from dataclasses import dataclass

import numpy as np

from qspeed import bound_report, earliest_crossing
from qspeed.catalog import Row, TableRowSpec, make_state, tight_alpha


@dataclass
class Config:
    points: int = 10
    tol: float = 1e-10


def main(cfg: Config) -> None:
    print(f"{'eps':>6} {'alpha':>9} {'tau_C':>12} {'crossing':>12} {'rel gap':>9}")
    for eps in np.linspace(0.0, 0.9, cfg.points):
        state = make_state(TableRowSpec(Row.TIGHT_EPS, eps=float(eps)))
        tau_c = bound_report(state, eps).tau_c
        r = earliest_crossing(state, eps, tol=cfg.tol)
        print(f"{eps:>6.3f} {tight_alpha(eps):>9.6f} {tau_c:>12.8f} {r.tau:>12.8f} {abs(r.tau / tau_c - 1):>9.1e}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=Config.points)
    p.add_argument("--tol", type=float, default=Config.tol)
    main(Config(**vars(p.parse_args())))
