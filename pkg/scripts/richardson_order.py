"""Error of the extrapolated semigroup quotient against the carre du champ.

For each system, prints the worst relative residual over random pairs as a
function of the number of sample times (halving from ``t0``). The two-point
column is the one gated by the acceptance suite.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from ncdirac import schur


@dataclass(frozen=True)
class Config:
    systems: tuple[str, ...] = ("heat:2", "heat:3", "heat:4", "poisson:4")
    t0: float = 1e-3
    max_points: int = 4
    samples: int = 5
    seed: int = 0


def run(cfg: Config) -> dict[str, list[float]]:
    rng = np.random.default_rng(cfg.seed)
    out = {}
    for name in cfg.systems:
        sys = schur.parse_family(name)
        n = sys.index_count
        pairs = [(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) for _ in range(cfg.samples)]
        row = []
        for k in range(1, cfg.max_points + 1):
            ts = tuple(cfg.t0 / 2**i for i in range(k))
            row.append(max(schur.gamma_limit_check(sys, x, y, ts).residual for x, y in pairs))
        out[name] = row
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--systems", nargs="+", default=list(Config.systems))
    ap.add_argument("--t0", type=float, default=Config.t0)
    ap.add_argument("--max-points", type=int, default=Config.max_points)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    cfg = Config(tuple(a.systems), a.t0, a.max_points, a.samples, a.seed)
    table = run(cfg)
    print("system".ljust(12) + "".join(f"{k} pts".rjust(11) for k in range(1, cfg.max_points + 1)))
    for name, row in table.items():
        print(name.ljust(12) + "".join(f"{v:11.2e}" for v in row))


if __name__ == "__main__":
    main()
