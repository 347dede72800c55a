"""Gap values for the built-in families and the cocycle comparison."""

from __future__ import annotations

import argparse

import numpy as np

from ncdirac import fourier, schur


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--donut", nargs="+", default=["8:1:1", "8:1:3", "12:1:5", "16:3:5"])
    a = ap.parse_args()
    print("Schur families")
    for n in range(2, a.max_n + 1):
        print(f"  n={n:<3} heat {schur.gap(schur.heat_family(n)):.6f}   poisson {schur.gap(schur.poisson_family(n)):.6f}")
    print("cocycles: G_alpha (Herz-Schur family) vs G_psi")
    specs = [f"donut:{d}" for d in a.donut] + [f"Zn:{n}" for n in (4, 6, 8)] + ["regular:4", "levy:Z5:1,2,2,1"]
    for spec in specs:
        g_alpha, g_psi, rep = fourier.gap_comparison(fourier.parse_cocycle(spec))
        flag = "strict" if g_alpha < g_psi - 1e-12 else "equal" if np.isclose(g_alpha, g_psi) else "?"
        print(f"  {spec:<18} {g_alpha:.6f}  {g_psi:.6f}  {flag}  {'ok' if rep.passed else 'VIOLATED'}")


if __name__ == "__main__":
    main()
