"""Random-state sweep: how close do the numerically found crossing times
come to each lower bound?

Prints, per epsilon, the smallest and median ratio tau / bound over the
sampled states together with the fraction of states for which each bound
is the largest (tightest) of the three.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from qspeed import PureState, bound_report, earliest_crossing


@dataclass
class Config:
    states: int = 300
    max_dim: int = 8
    # generic states never reach fidelity exactly 0, so eps = 0 finds nothing
    eps: tuple = (0.1, 0.3, 0.6, 0.9)
    seed: int = 1


def random_state(rng, max_dim):
    d = int(rng.integers(2, max_dim + 1))
    amp = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState.from_arrays(rng.uniform(-5, 5, d), amp / np.linalg.norm(amp))


def main(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    states = [random_state(rng, cfg.max_dim) for _ in range(cfg.states)]
    print(f"{'eps':>4} {'n':>5}  {'min/med TEUR':>16}  {'min/med ML':>16}  {'min/med C':>16}  wins T/M/C")
    for eps in cfg.eps:
        ratios, wins = [], np.zeros(3, dtype=int)
        for s in states:
            r = earliest_crossing(s, eps)
            if not r.converged:
                continue
            rep = bound_report(s, eps)
            b = np.array([rep.tau_teur, rep.tau_ml, rep.tau_c])
            ratios.append(r.tau / b)
            wins[np.argmax(b)] += 1
        if not ratios:
            print(f"{eps:>4} {0:>5}  no crossings")
            continue
        ratios = np.array(ratios)
        cols = "  ".join(f"{ratios[:, k].min():7.4f}/{np.median(ratios[:, k]):7.3f}" for k in range(3))
        print(f"{eps:>4} {len(ratios):>5}  {cols}  {'/'.join(map(str, wins))}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--states", type=int, default=Config.states)
    p.add_argument("--max-dim", type=int, default=Config.max_dim)
    p.add_argument("--eps", type=float, nargs="+", default=list(Config.eps))
    p.add_argument("--seed", type=int, default=Config.seed)
    main(Config(**vars(p.parse_args())))
