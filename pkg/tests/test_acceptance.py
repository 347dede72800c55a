"""Acceptance criteria, one test per criterion.

Each test prints ``PASS <n>: ...`` or ``FAIL <n>: ...``; the lines are also
repeated in the pytest terminal summary. Run this file directly to print
the table without pytest.
"""

from __future__ import annotations

import itertools
import time

import numpy as np
import pytest

from ncdirac import dirac, fourier, metric, schur, suites
from ncdirac.fock import build_fock, fermion_square_residual, q_relation_residual, word_vacuum_trace
from ncdirac.wick import wick_trace

Q_GRID = suites.Q_GRID
RESULTS: list[str] = []

SCHUR_BUILTIN = ["heat:2", "heat:3", "heat:4", "poisson:2", "poisson:3", "poisson:4"]
GROUP_BUILTIN = ["donut:8:1:1", "regular:2", "regular:4", "Zn:2", "Zn:4", "Zn:6", "levy:Z5:1,2,2,1"]


def random_schur(count=4, seed=2024):
    """Random real families with ``|I| <= 5``."""
    rng = np.random.default_rng(seed)
    shapes = [(3, 1), (4, 2), (5, 2), (5, 3), (2, 2), (4, 3)][:count]
    return [schur.random_family(n, h, rng, f"random:{n}x{h}") for n, h in shapes]


def all_systems():
    return [suites.parse_system(s) for s in SCHUR_BUILTIN + GROUP_BUILTIN] + random_schur(2)


def gradients(systems=None, q_list=Q_GRID):
    for sys in systems or all_systems():
        for q in q_list:
            yield sys, q, suites.gradient_for(sys, suites.check_fock(sys, q))


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} {n}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# -- criteria ---------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    worst, words = 0.0, 0
    rng = np.random.default_rng(11)
    for dim in (1, 2, 3):
        # a fixed non-orthogonal frame, so cross inner products enter
        frame = list(np.eye(dim) + 0.3 * rng.standard_normal((dim, dim)))
        for q in Q_GRID:
            space = build_fock(q, dim, 3)
            for m in range(7):
                for idx in itertools.product(range(dim), repeat=m):
                    vecs = [frame[i] for i in idx]
                    worst = max(worst, abs(wick_trace(q, vecs) - word_vacuum_trace(space, vecs)))
                    words += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10
    return ok, f"Wick vs Fock vacuum trace, {words} words, max |diff| = {worst:.2e}, {elapsed:.1f}s"


def criterion_2():
    start = time.perf_counter()
    worst = 0.0
    for dim in (1, 2, 3):
        for q in Q_GRID:
            worst = max(worst, q_relation_residual(build_fock(q, dim, 4)))
    elapsed = time.perf_counter() - start
    return worst < 1e-9 and elapsed < 5, f"q-relation below cap 4, max residual = {worst:.2e}, {elapsed:.1f}s"


def criterion_3():
    rng = np.random.default_rng(3)
    worst = 0.0
    for dim in (1, 2, 3, 4):
        space = build_fock(-1.0, dim, dim)
        for _ in range(20):
            e = rng.standard_normal(dim)
            worst = max(worst, fermion_square_residual(space, e / np.linalg.norm(e)))
    return worst < 1e-12, f"fermion square s(e)^2 = Id, 80 unit vectors, max residual = {worst:.2e}"


def criterion_4():
    start = time.perf_counter()
    systems = [schur.heat_family(4), schur.poisson_family(4)] + random_schur()
    worst = 0.0
    for sys in systems:
        for q in Q_GRID:
            rep = schur.gamma_identity_check(sys, suites.check_fock(sys, q), samples=5, seed=0, tol=1e-9)
            worst = max(worst, rep.residual)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 30
    return ok, f"Gamma definition / closed form / E(grad* grad), {len(systems)} systems x 5 q, max = {worst:.2e}, {elapsed:.1f}s"


def criterion_5():
    systems = [schur.heat_family(4), schur.poisson_family(4)] + random_schur()
    rng = np.random.default_rng(5)
    per = {}
    for sys in systems:
        n = sys.index_count
        per[sys.name] = max(
            schur.gamma_limit_check(sys, _complex(rng, n, n), _complex(rng, n, n), (1e-3, 5e-4)).residual for _ in range(5)
        )
    worst = max(per.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in per.items())
    return worst < 1e-5, f"two-point Richardson limit at t = 1e-3, 5e-4: {detail}"


def criterion_6():
    rng = np.random.default_rng(6)
    worst = 0.0
    count = 0
    systems = [suites.parse_system(s) for s in ("heat:3", "poisson:4", "donut:8:1:1", "Zn:4", "regular:3")] + random_schur(1)
    for sys, q, gs in gradients(systems, (-1.0, 0.0, 1.0)):
        for _ in range(100):
            x = gs.random_source(rng)
            lhs = gs.carrier_lp_norm(gs.grad_operator(x), 2)[0]
            rhs = gs.source_lp_norm(gs.apply_sqrtA(x), 2)
            if rhs > 0:
                worst = max(worst, abs(lhs - rhs) / rhs)
                count += 1
    return worst < 1e-10, f"p=2 Kato equality, {count} samples over Schur and Fourier, max rel err = {worst:.2e}"


def criterion_7():
    start = time.perf_counter()
    worst, runs = 0.0, 0
    for _, _, gs in gradients():
        rep = dirac.verify_square(gs, 1e-9)
        worst = max(worst, rep.residual)
        runs += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 60
    return ok, f"D^2 = diag(grad* grad, grad grad*), A = grad* grad, {runs} runs, max = {worst:.2e}, {elapsed:.1f}s"


def criterion_8():
    worst = 0.0
    for _, _, gs in gradients(q_list=(-1.0, 0.0, 1.0)):
        for t in suites.RESOLVENT_TIMES:
            worst = max(worst, dirac.verify_resolvent(gs, t, 1e-8).residual)
    return worst < 1e-8, f"two-sided resolvent inverse for t in +-0.1, +-1, +-10, max = {worst:.2e}"


def criterion_9():
    worst = 0.0
    for _, _, gs in gradients(q_list=(-1.0, 0.0, 1.0)):
        worst = max(worst, dirac.verify_hodge_decomposition(gs, 1e-9).residual)
    return worst < 1e-9, f"Hodge projections orthogonal and complete, max = {worst:.2e}"


def criterion_10():
    rng = np.random.default_rng(10)
    comm = sq = 0.0
    squares = 0
    for sys, q, gs in gradients(q_list=(-1.0, 0.0, 1.0)):
        for _ in range(2):
            comm = max(comm, dirac.commutator_hodge(gs, gs.random_source(rng), 1e-9)[2].residual)
        fock = suites.check_fock(sys, q)
        dd = dirac.build_dirac2_fourier(sys, fock) if suites.is_group(sys) else dirac.build_dirac2_schur(sys, fock)
        rep = dirac.dirac2_check(dd, gs, tol=1e-9)
        if dd.exact_square:
            squares += 1
        sq = max(sq, rep.residual)
    ok = max(comm, sq) < 1e-9 and squares > 0
    return ok, f"commutator closed forms max = {comm:.2e}; type II commutator and square ({squares} exact squares) max = {sq:.2e}"


def criterion_11():
    start = time.perf_counter()
    gaps = []
    for n in range(2, 13):
        gaps += [schur.gap(schur.heat_family(n)), schur.gap(schur.poisson_family(n))]
    heat_poisson = max(abs(g - 1.0) for g in gaps)
    donut = fourier.build_cocycle_donut(8, 1, 1)
    g_alpha, g_psi, _ = fourier.gap_comparison(donut)
    psi_err = abs(g_psi - 4 * (1 - 1 / np.sqrt(2)))
    alpha_ok = g_alpha <= 8 * (1 - 1 / np.sqrt(2)) ** 2 + 1e-12 and g_alpha < g_psi
    general = all(fourier.gap_comparison(suites.parse_system(s))[2].passed for s in GROUP_BUILTIN + ["donut:12:1:5", "regular:6"])
    elapsed = time.perf_counter() - start
    ok = heat_poisson < 1e-12 and psi_err < 1e-12 and alpha_ok and general and elapsed < 10
    detail = (
        f"heat/poisson gaps = 1 (max err {heat_poisson:.0e}); donut G_psi = {g_psi:.12f} (err {psi_err:.0e}), "
        f"G_alpha = {g_alpha:.12f}; G_alpha <= G_psi on all cocycles: {general}; {elapsed:.1f}s"
    )
    return ok, detail


def criterion_12():
    rng = np.random.default_rng(12)
    systems = [schur.heat_family(20), schur.poisson_family(20)]
    for i in range(20):
        systems.append(schur.random_family(int(rng.integers(3, 9)), int(rng.integers(1, 4)), rng, f"random{i}"))
    worst = max(schur.counting_bound_check(sys, 10).residual for sys in systems)
    return worst == 0, f"shell counts within (5^n - 1) k^(n-1) for k <= 10 on {len(systems)} systems, max excess = {worst}"


def criterion_13():
    reps = [fourier.levy_check(n, 1e-12) for n in range(3, 13)]
    worst = max(r.residual for r in reps)
    return all(r.passed for r in reps), f"Levy cocycle on Z_n, n = 3..12, max residual = {worst:.2e}"


def criterion_14():
    names = ["heat:2", "heat:3", "poisson:4", "donut:8:1:1", "Zn:4"]
    kernel = leib = True
    for name in names:
        for p in (2.0, 4.0, np.inf):
            spec = metric.LipSeminormSpec(suites.parse_system(name), p)
            k = metric.kernel_check(spec)
            kernel &= k.passed and k.value["is_scalars_only"]
            leib &= metric.leibniz_check(spec, samples=100, seed=14).passed
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    golden = metric.gamma_seminorm(metric.LipSeminormSpec(schur.heat_family(2), 2.0), x)
    err = abs(golden - np.sqrt(2))
    ok = kernel and leib and err < 1e-10
    return ok, f"kernel = scalars: {kernel}; Leibniz on 100 pairs: {leib}; heat:2 seminorm = {golden:.12f} (err {err:.0e})"


def criterion_15():
    systems = [suites.parse_system(s) for s in SCHUR_BUILTIN] + random_schur()
    reps = [schur.riesz_parseval_check(sys, samples=10, seed=15, tol=1e-10) for sys in systems]
    worst = max(r.residual for r in reps)
    return all(r.passed for r in reps), f"Riesz square function Parseval on {len(systems)} systems, max rel err = {worst:.2e}"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 16)}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance(n):
    ok, detail = CRITERIA[n]()
    assert record(n, ok, detail), detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        record(n, *CRITERIA[n]())
