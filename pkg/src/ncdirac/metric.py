"""Gamma seminorms, their kernels, the Leibniz inequality and sampled Monge-Kantorovich bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier, schur
from .fourier import GroupCocycleSystem
from .linalg import adjoint, as_matrix, is_psd, matrix_from_json, matrix_to_json, op_norm
from .report import CheckReport, check, merge
from .schur import SchurSystem

System = SchurSystem | GroupCocycleSystem


@dataclass(frozen=True)
class LipSeminormSpec:
    system: System
    p: float = 2.0

    def __post_init__(self):
        if self.p < 2:
            raise NotImplementedError("only p >= 2 is supported")

    @property
    def is_group(self) -> bool:
        return isinstance(self.system, GroupCocycleSystem)

    @property
    def algebra_dim(self) -> int:
        if self.is_group:
            return self.system.group.order
        return self.system.index_count


@dataclass(frozen=True)
class MatrixState:
    """Density matrix on the algebra's natural Hilbert space (``l^2_I`` or ``l^2(G)``)."""

    density: np.ndarray

    def __post_init__(self):
        d = as_matrix(self.density)
        if abs(np.trace(d) - 1) > 1e-10:
            raise ValueError("density must have trace 1")
        if not is_psd(d, 1e-10):
            raise ValueError("density must be positive semidefinite")

    @classmethod
    def diagonal(cls, weights) -> "MatrixState":
        return cls(np.diag(np.asarray(weights, dtype=complex)))

    def to_json(self) -> dict:
        return matrix_to_json(self.density)

    @classmethod
    def from_json(cls, obj: dict) -> "MatrixState":
        return cls(matrix_from_json(obj))


def _operator(spec: LipSeminormSpec, x) -> np.ndarray:
    """Matrix of ``x`` on the natural Hilbert space."""
    if spec.is_group:
        return fourier.lambda_matrix(spec.system.group, x)
    return as_matrix(x)


def _adjoint(spec: LipSeminormSpec, x):
    if spec.is_group:
        return fourier.group_adjoint(spec.system.group, x)
    return adjoint(as_matrix(x))


def _product(spec: LipSeminormSpec, x, y):
    if spec.is_group:
        return fourier.convolve(spec.system.group, x, y)
    return as_matrix(x) @ as_matrix(y)


def _identity(spec: LipSeminormSpec):
    if spec.is_group:
        return fourier.unit(spec.system.group, spec.system.group.identity)
    return np.eye(spec.algebra_dim, dtype=complex)


def gamma_seminorm(spec: LipSeminormSpec, x) -> float:
    """``max(||Gamma(x,x)^{1/2}||_p, ||Gamma(x^*,x^*)^{1/2}||_p)``."""
    if spec.is_group:
        return fourier.group_gamma_seminorm(spec.system, x, spec.p)
    return schur.gamma_seminorm(spec.system, x, spec.p)


def _random(spec: LipSeminormSpec, rng: np.random.Generator, selfadjoint: bool = False, unitized: bool = False):
    """Random element; ``unitized`` draws from null-diagonal matrices plus scalars."""
    n = spec.algebra_dim
    if spec.is_group:
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if unitized:
            np.fill_diagonal(x, 0.0)
            x = x + rng.standard_normal() * np.eye(n)
    if selfadjoint:
        x = 0.5 * (x + _adjoint(spec, x))
    return x


def _basis(spec: LipSeminormSpec):
    """Basis of the null-diagonal part: off-diagonal units or ``lambda_s``, ``s != e``."""
    n = spec.algebra_dim
    if spec.is_group:
        g = spec.system.group
        return [(s, fourier.unit(g, s)) for s in range(n) if s != g.identity]
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                e = np.zeros((n, n), dtype=complex)
                e[i, j] = 1.0
                out.append(((i, j), e))
    return out


def kernel_check(spec: LipSeminormSpec, tol: float = 1e-12) -> CheckReport:
    """Null-diagonal elements with vanishing seminorm, beyond the scalars.

    A non-injective system reports its kernel (the classes of equal data) and
    still passes; ``params["degenerate"]`` flags it.
    """
    sys = spec.system
    if spec.is_group:
        gen = sys.psi
        kernel = [s for s in range(spec.algebra_dim) if s != sys.group.identity and gen[s] <= tol * max(1.0, gen.max())]
        injective = not kernel
    else:
        mask = sys.kernel_mask()
        kernel = [(i, j) for i in range(spec.algebra_dim) for j in range(spec.algebra_dim) if i != j and mask[i, j]]
        injective = sys.injective
    # the seminorm of each basis element vanishes exactly on the reported kernel
    seminorms = {str(k): gamma_seminorm(spec, v) for k, v in _basis(spec)}
    mismatch = 0.0
    for k, v in _basis(spec):
        in_kernel = k in kernel
        val = seminorms[str(k)]
        if in_kernel:
            mismatch = max(mismatch, val)
        elif val <= tol:
            mismatch = max(mismatch, 1.0)
    scalar = gamma_seminorm(spec, _identity(spec))
    parts = [
        check("scalars_in_kernel", scalar, 1e-10),
        check("kernel_matches_generator", mismatch, 1e-10),
    ]
    out = merge("lip_kernel", parts, system=sys.name, p=spec.p, degenerate=not injective)
    out.value = {"kernel": [list(k) if isinstance(k, tuple) else int(k) for k in kernel], "is_scalars_only": injective}
    return out


def leibniz_check(spec: LipSeminormSpec, samples: int = 100, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Leibniz, triangle, homogeneity and ``*``-symmetry of the seminorm on random pairs."""
    rng = np.random.default_rng(seed)
    leib = tri = hom = sym = 0.0
    for _ in range(samples):
        x, y = _random(spec, rng), _random(spec, rng)
        nx, ny = gamma_seminorm(spec, x), gamma_seminorm(spec, y)
        ox, oy = op_norm(_operator(spec, x)), op_norm(_operator(spec, y))
        rhs = ox * ny + nx * oy
        leib = max(leib, (gamma_seminorm(spec, _product(spec, x, y)) - rhs) / max(1.0, rhs))
        tri = max(tri, (gamma_seminorm(spec, x + y) - nx - ny) / max(1.0, nx + ny))
        k = complex(rng.standard_normal(), rng.standard_normal())
        hom = max(hom, abs(gamma_seminorm(spec, k * x) - abs(k) * nx) / max(1.0, abs(k) * nx))
        sym = max(sym, abs(gamma_seminorm(spec, _adjoint(spec, x)) - nx) / max(1.0, nx))
    parts = [
        check("leibniz_inequality", max(leib, 0.0), tol),
        check("triangle_inequality", max(tri, 0.0), tol),
        check("homogeneity", hom, tol),
        check("adjoint_symmetry", sym, tol),
    ]
    out = merge("leibniz", parts, system=spec.system.name, p=spec.p, samples=samples)
    out.seed = seed
    return out


def state_value(spec: LipSeminormSpec, state: MatrixState, a) -> complex:
    return complex(np.trace(as_matrix(state.density) @ _operator(spec, a)))


def mk_lower_bound(spec: LipSeminormSpec, phi: MatrixState, psi_state: MatrixState, samples: int = 200, seed: int = 0) -> float:
    """``max |phi(a) - psi(a)|`` over sampled selfadjoint ``a`` rescaled to seminorm 1.

    For Schur systems ``a`` ranges over the unitized null-diagonal algebra. A
    lower bound on the Monge-Kantorovich distance; the ``k``-sample
    value is the running maximum, so it never decreases with ``samples``.
    """
    n = spec.algebra_dim
    if phi.density.shape != (n, n) or psi_state.density.shape != (n, n):
        raise ValueError("states must act on the algebra's Hilbert space")
    if kernel_check(spec).params.get("degenerate"):
        raise ValueError("seminorm kernel is larger than the scalars")
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        a = _random(spec, rng, selfadjoint=True, unitized=True)
        norm = gamma_seminorm(spec, a)
        if norm <= 1e-12:
            continue
        best = max(best, abs(state_value(spec, phi, a) - state_value(spec, psi_state, a)) / norm)
    return float(best)


def seminorm_suite(spec: LipSeminormSpec, samples: int = 100, seed: int = 0) -> list[CheckReport]:
    out = [kernel_check(spec), leibniz_check(spec, samples, seed)]
    if spec.p == 2 and not spec.is_group:
        out.append(p2_identity_check(spec, samples=10, seed=seed))
    return out


def p2_identity_check(spec: LipSeminormSpec, samples: int = 10, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    """At ``p = 2`` the seminorm of selfadjoint ``x`` is ``||A^{1/2} x||_2``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = _random(spec, rng, selfadjoint=True)
        lhs = gamma_seminorm(spec, x)
        rhs = np.linalg.norm(schur.apply_sqrt_generator(spec.system, x))
        worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
    out = check("seminorm_p2_identity", worst, tol, system=spec.system.name)
    out.seed = seed
    return out
