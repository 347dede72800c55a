"""Sampled Kato and Khintchine ratios for several systems, q values and exponents."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from ncdirac import dirac, suites


@dataclass(frozen=True)
class Config:
    systems: tuple[str, ...] = ("heat:3", "heat:4", "poisson:4", "Zn:4", "donut:8:1:1")
    q_list: tuple[float, ...] = (-1.0, 0.0, 1.0)
    p_list: tuple[float, ...] = (2.0, 4.0, 6.0)
    samples: int = 50
    seed: int = 0


def run(cfg: Config) -> list[dict]:
    rows = []
    for name in cfg.systems:
        sys = suites.parse_system(name)
        for q in cfg.q_list:
            gs = suites.gradient_for(sys, suites.check_fock(sys, q))
            rep = dirac.kato_ratio_report(gs, cfg.p_list, cfg.samples, cfg.seed)
            for p, stats in rep.value.items():
                rows.append({"system": name, "q": q, "p": float(p), **stats})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--systems", nargs="+", default=list(Config.systems))
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--json", action="store_true", help="print JSON instead of a table")
    a = ap.parse_args()
    cfg = Config(systems=tuple(a.systems), samples=a.samples, seed=a.seed)
    rows = run(cfg)
    if a.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"{'system':<12}{'q':>6}{'p':>5}{'kato min':>11}{'kato max':>11}{'khin min':>11}{'khin max':>11}  exact")
    for r in rows:
        print(
            f"{r['system']:<12}{r['q']:>6.1f}{r['p']:>5.0f}{r['kato_min']:>11.4f}{r['kato_max']:>11.4f}"
            f"{r['khintchine_min']:>11.4f}{r['khintchine_max']:>11.4f}  {r['truncation_exact']}"
        )


if __name__ == "__main__":
    main()
