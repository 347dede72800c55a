"""System parsing and the verification suites run by the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dirac, fourier, metric, schur
from .fock import FockBudgetError, QFockSpace, build_fock
from .fourier import GroupCocycleSystem
from .gradient import GradientSystem
from .linalg import default_tol
from .report import CheckReport, check, timed_call as _t
from .schur import SchurSystem

Q_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
RESOLVENT_TIMES = (0.1, -0.1, 1.0, -1.0, 10.0, -10.0)
SUITES = ("gamma", "dirac", "metric", "gap")
CARRIER_BUDGET = 4096


@dataclass(frozen=True)
class SuiteConfig:
    q_list: tuple[float, ...] = Q_GRID
    seed: int = 0
    samples: int = 5
    metric_samples: int = 20
    p_list: tuple[float, ...] = (2.0, 4.0)
    metric_p: tuple[float, ...] = (2.0, 4.0, float("inf"))
    limit_times: tuple[float, ...] = (1e-3, 5e-4)
    counting_k: int = 6


def parse_system(spec: str) -> SchurSystem | GroupCocycleSystem:
    """Built-in names or a JSON file (``alpha`` for Schur, ``table`` for groups)."""
    kind = spec.split(":", 1)[0]
    if kind in ("heat", "poisson"):
        return schur.parse_family(spec)
    if kind in ("Zn", "donut", "levy", "regular"):
        return fourier.parse_cocycle(spec)
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        obj = json.loads(path.read_text())
        if "alpha" in obj:
            return schur.family_from_json(obj, spec)
        if "table" in obj:
            return fourier.cocycle_from_json(obj, name=spec)
        raise ValueError(f"{spec}: expected an 'alpha' or 'table' key")
    raise ValueError(f"unknown system {spec!r}")


def is_group(sys) -> bool:
    return isinstance(sys, GroupCocycleSystem)


def check_fock(sys, q: float) -> QFockSpace:
    """Fock space for identity checks: full exterior algebra at ``q = -1`` when affordable, else two levels."""
    factor = sys.group.order if is_group(sys) else 1
    h = sys.h_dim
    if q == -1 and factor * 2**h <= CARRIER_BUDGET:
        try:
            return build_fock(q, h, h)
        except FockBudgetError:
            pass
    return build_fock(q, h, 2)


def gradient_for(sys, fock: QFockSpace) -> GradientSystem:
    if is_group(sys):
        return fourier.gradient_system(sys, fock)
    return schur.gradient_system(sys, fock)


def _random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def gamma_suite(sys, cfg: SuiteConfig) -> list[CheckReport]:
    tol = default_tol()
    out: list[CheckReport] = []
    if is_group(sys):
        out.append(_t(sys.check))
        out.append(_t(fourier.herz_schur_check, sys))
        for q in cfg.q_list:
            out.append(_t(fourier.group_gamma_check, sys, check_fock(sys, q), cfg.samples, cfg.seed, tol))
        return out
    for q in cfg.q_list:
        out.append(_t(schur.gamma_identity_check, sys, check_fock(sys, q), cfg.samples, cfg.seed, tol))
    rng = np.random.default_rng(cfg.seed)
    n = sys.index_count
    worst = None
    for _ in range(cfg.samples):
        r = _t(schur.gamma_limit_check, sys, _random_matrix(rng, n), _random_matrix(rng, n), cfg.limit_times)
        if worst is None or r.residual > worst.residual:
            worst = r
    worst.seed = cfg.seed
    out.append(worst)
    out.append(_t(schur.riesz_parseval_check, sys, cfg.samples, cfg.seed))
    return out


def dirac_suite(sys, cfg: SuiteConfig) -> list[CheckReport]:
    tol = default_tol()
    out: list[CheckReport] = []
    rng = np.random.default_rng(cfg.seed)
    for q in cfg.q_list:
        fock = check_fock(sys, q)
        gs = gradient_for(sys, fock)
        out.append(_t(lambda: check("grad_adjointness", gs.adjointness_residual(seed=cfg.seed), tol, seed=cfg.seed, **gs.params)))
        out.append(_t(dirac.verify_square, gs, tol))
        out.append(_t(dirac.full_vs_restricted_check, gs, tol))
        out.extend(_t(dirac.verify_resolvent, gs, t) for t in RESOLVENT_TIMES)
        out.append(_t(dirac.verify_hodge_decomposition, gs, tol))
        out.append(_t(dirac.spectrum_check, gs, tol))
        out.append(_t(dirac.even_structure_check, gs, seed=cfg.seed))
        a = gs.random_source(rng)
        out.append(_t(lambda: dirac.commutator_hodge(gs, a, tol)[2]))
        out.append(_t(dirac.commutator_leibniz_check, gs, seed=cfg.seed, tol=tol))
        if is_group(sys):
            d2 = dirac.build_dirac2_fourier(sys, fock)
        else:
            out.append(_t(dirac.unit_commutator_bound, gs, sys, tol))
            d2 = dirac.build_dirac2_schur(sys, fock)
        out.append(_t(dirac.dirac2_check, d2, gs, seed=cfg.seed, tol=tol))
        out.append(_t(dirac.kato_ratio_report, gs, cfg.p_list, cfg.samples, cfg.seed, tol))
    return out


def metric_suite(sys, cfg: SuiteConfig) -> list[CheckReport]:
    out: list[CheckReport] = []
    for p in cfg.metric_p:
        spec = metric.LipSeminormSpec(sys, p)
        out.append(_t(metric.kernel_check, spec))
        out.append(_t(metric.leibniz_check, spec, cfg.metric_samples, cfg.seed))
        if p == 2 and not is_group(sys):
            out.append(_t(metric.p2_identity_check, spec, 10, cfg.seed))
        out.append(_t(mk_symmetry_report, spec, cfg))
    return out


def mk_symmetry_report(spec: metric.LipSeminormSpec, cfg: SuiteConfig) -> CheckReport:
    """Sampled MK lower bound between a pure vector state and the uniform vector state; symmetry is asserted."""
    n = spec.algebra_dim
    e0 = np.zeros(n)
    e0[0] = 1.0
    u = np.ones(n) / np.sqrt(n)
    phi = metric.MatrixState(np.outer(e0, e0))
    psi = metric.MatrixState(np.outer(u, u))
    if metric.kernel_check(spec).params.get("degenerate"):
        return check("mk_lower_bound", 0.0, 0.0, seed=cfg.seed, system=spec.system.name, p=spec.p, skipped="degenerate kernel")
    a = metric.mk_lower_bound(spec, phi, psi, cfg.metric_samples, cfg.seed)
    b = metric.mk_lower_bound(spec, psi, phi, cfg.metric_samples, cfg.seed)
    return check("mk_lower_bound", abs(a - b) / max(1.0, a), 1e-12, seed=cfg.seed, value=a, system=spec.system.name, p=spec.p)


def gap_suite(sys, cfg: SuiteConfig) -> list[CheckReport]:
    if is_group(sys):
        return [_t(lambda: fourier.gap_comparison(sys)[2])]
    g = schur.gap(sys)
    rep = check("gap_value", 0.0, 0.0, value=g, system=sys.name)
    if not np.isfinite(g):
        return [rep]
    return [rep, _t(schur.counting_bound_check, sys, cfg.counting_k)]


RUNNERS = {"gamma": gamma_suite, "dirac": dirac_suite, "metric": metric_suite, "gap": gap_suite}


def run_suites(sys, suite: str, cfg: SuiteConfig) -> list[CheckReport]:
    names = SUITES if suite == "all" else (suite,)
    out: list[CheckReport] = []
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
        out.extend(RUNNERS[name](sys, cfg))
    return out
