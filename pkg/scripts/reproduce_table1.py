"""Recompute the bound comparison on the reference states and write it as CSV.

    python3 scripts/reproduce_table1.py --n-max 5 -o table1.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from qspeed.catalog import table1_report


@dataclass
class Config:
    n_max: int = 3
    energy_scale: float = 1.0
    hbar: float = 1.0
    output: str = ""


def main(cfg: Config) -> None:
    rows = table1_report(cfg.energy_scale, cfg.hbar, list(range(1, cfg.n_max + 1)))
    out = open(cfg.output, "w", newline="") if cfg.output else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["state", "tau", "numeric_tau", "teur/tau", "ml/tau", "c/tau", "printed", "flags"])
    for r in rows:
        writer.writerow([
            r.label, f"{r.analytic_tau:.10f}", f"{r.numeric_tau:.10f}",
            *(f"{x:.5f}" for x in r.ratios),
            " ".join(f"{x:.3f}" for x in r.printed),
            "; ".join(r.flags),
        ])
    if out is not sys.stdout:
        out.close()
    flagged = [r.label for r in rows if r.flags]
    print(f"{len(rows)} rows, flagged: {', '.join(flagged) or 'none'}", file=sys.stderr)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=Config.n_max)
    p.add_argument("--energy-scale", type=float, default=Config.energy_scale)
    p.add_argument("--hbar", type=float, default=Config.hbar)
    p.add_argument("-o", "--output", default="")
    main(Config(**vars(p.parse_args())))
