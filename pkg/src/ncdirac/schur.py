"""Markovian semigroups of Schur multipliers on |I| x |I| matrices.

A system is given by a family ``alpha_i`` in a real Hilbert space H; the
generator multiplies entry ``(i, j)`` by ``a_ij = ||alpha_i - alpha_j||^2``.
Gradients take values in q-Gaussians tensor matrices, realised on
``Fock (x) l^2_I`` with the Fock factor first (index ``f * |I| + i``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .fock import QFockSpace, s_q
from .gradient import GradientSystem
from .linalg import (
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    is_psd,
    mat_sqrt_psd,
    op_norm,
    psd_power,
    rel_residual,
    schatten_norm,
)
from .report import CheckReport, check, merge

MAX_GAP_INDICES = 64
SCHOENBERG_TIMES = (0.1, 1.0, 10.0)


@dataclass(frozen=True)
class SchurSystem:
    alpha: np.ndarray
    name: str = "schur"

    @property
    def index_count(self) -> int:
        return self.alpha.shape[0]

    @property
    def h_dim(self) -> int:
        return self.alpha.shape[1]

    @cached_property
    def symbol(self) -> np.ndarray:
        d = self.alpha[:, None, :] - self.alpha[None, :, :]
        return np.einsum("ijk,ijk->ij", d, d)

    def difference(self, i: int, j: int) -> np.ndarray:
        return self.alpha[i] - self.alpha[j]

    @cached_property
    def classes(self) -> np.ndarray:
        """Label of the class ``i ~ j  <=>  alpha_i = alpha_j``."""
        labels = -np.ones(self.index_count, dtype=int)
        scale = max(float(self.symbol.max(initial=0.0)), 1.0)
        nxt = 0
        for i in range(self.index_count):
            if labels[i] < 0:
                same = self.symbol[i] <= 1e-12 * scale
                labels[same & (labels < 0)] = nxt
                nxt += 1
        return labels

    @property
    def injective(self) -> bool:
        return len(set(self.classes.tolist())) == self.index_count

    def kernel_mask(self) -> np.ndarray:
        """Entries spanning ``ker A``: the block-diagonal part of the class partition."""
        c = self.classes
        return c[:, None] == c[None, :]


def build_schur(alpha, name: str = "schur") -> SchurSystem:
    a = np.asarray(alpha, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] == 0:
        raise ValueError("alpha must be a nonempty list of equal-length vectors")
    if not np.all(np.isfinite(a)):
        raise ValueError("alpha has non-finite entries")
    sys = SchurSystem(a, name)
    for t in SCHOENBERG_TIMES:
        if not is_psd(np.exp(-t * sys.symbol), 1e-9):
            raise ValueError(f"exp(-{t} a) is not positive semidefinite")
    return sys


def heat_family(n: int) -> SchurSystem:
    return build_schur(np.arange(n, dtype=float)[:, None], f"heat:{n}")


def poisson_family(n: int) -> SchurSystem:
    """``alpha_i = e_1 + ... + e_i`` (``alpha_0 = 0``), so ``a_ij = |i - j|``."""
    dim = max(n - 1, 1)
    alpha = np.zeros((n, dim))
    for i in range(1, n):
        alpha[i, :i] = 1.0
    return build_schur(alpha, f"poisson:{n}")


def random_family(n: int, h_dim: int, rng: np.random.Generator, name: str | None = None) -> SchurSystem:
    return build_schur(rng.standard_normal((n, h_dim)), name or f"random:{n}x{h_dim}")


def family_from_json(obj: dict, name: str = "file") -> SchurSystem:
    alpha = np.asarray(obj["alpha"], dtype=float)
    if "h_dim" in obj and alpha.shape[1] != int(obj["h_dim"]):
        raise ValueError("alpha vectors do not match h_dim")
    return build_schur(alpha, name)


def family_to_json(sys: SchurSystem) -> dict:
    return {"h_dim": sys.h_dim, "alpha": sys.alpha.tolist()}


def parse_family(spec: str) -> SchurSystem:
    """``heat:N``, ``poisson:N`` or a path to an alpha-family JSON file."""
    kind, _, arg = spec.partition(":")
    if kind == "heat":
        return heat_family(int(arg))
    if kind == "poisson":
        return poisson_family(int(arg))
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        return family_from_json(json.loads(path.read_text()), spec)
    raise ValueError(f"unknown Schur family {spec!r}")


def _square(sys: SchurSystem, x) -> np.ndarray:
    m = as_matrix(x)
    n = sys.index_count
    if m.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {m.shape}")
    return m


def apply_generator(sys: SchurSystem, x) -> np.ndarray:
    return sys.symbol * _square(sys, x)


def apply_semigroup(sys: SchurSystem, t: float, x) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return np.exp(-t * sys.symbol) * _square(sys, x)


def apply_sqrt_generator(sys: SchurSystem, x) -> np.ndarray:
    return np.sqrt(sys.symbol) * _square(sys, x)


def apply_inv_sqrt_generator(sys: SchurSystem, x) -> np.ndarray:
    """``A^{-1/2}``, with entries in ``ker A`` sent to 0."""
    root = np.sqrt(sys.symbol)
    inv = np.zeros_like(root)
    mask = ~sys.kernel_mask()
    inv[mask] = 1.0 / root[mask]
    return inv * _square(sys, x)


def carre_du_champ(sys: SchurSystem, x, y) -> np.ndarray:
    """``Gamma(x, y) = (A(x^*) y + x^* A(y) - A(x^* y)) / 2``."""
    x = _square(sys, x)
    y = _square(sys, y)
    xs = adjoint(x)
    return 0.5 * (apply_generator(sys, xs) @ y + xs @ apply_generator(sys, y) - apply_generator(sys, xs @ y))


def carre_du_champ_entries(sys: SchurSystem, x, y) -> np.ndarray:
    """Same form from the matrix-unit values ``Gamma(e_ij, e_il) = (a_ji + a_il - a_jl)/2 e_jl``."""
    x = _square(sys, x)
    y = _square(sys, y)
    a = sys.symbol
    # w[i, j, l] = (a_ji + a_il - a_jl) / 2
    w = 0.5 * (a.T[:, :, None] + a[:, None, :] - a[None, :, :])
    return np.einsum("ij,il,ijl->jl", np.conj(x), y, w)


def carre_du_champ_inner(sys: SchurSystem, x, y) -> np.ndarray:
    """Polarised form ``Gamma(e_ij, e_il) = <alpha_i - alpha_j, alpha_i - alpha_l> e_jl``."""
    x = _square(sys, x)
    y = _square(sys, y)
    d = sys.alpha[:, None, :] - sys.alpha[None, :, :]
    w = np.einsum("ijk,ilk->ijl", d, d)
    return np.einsum("ij,il,ijl->jl", np.conj(x), y, w)


def lagrange_weights_at_zero(ts) -> np.ndarray:
    """Weights ``w_i`` with ``sum_i w_i f(t_i) = P(0)`` for the interpolant ``P`` of ``f``."""
    ts = np.asarray(ts, dtype=float)
    if len(set(ts.tolist())) != ts.size or np.any(ts <= 0):
        raise ValueError("sample times must be distinct and positive")
    w = np.ones(ts.size)
    for i in range(ts.size):
        for j in range(ts.size):
            if i != j:
                w[i] *= ts[j] / (ts[j] - ts[i])
    return w


def gamma_limit_check(sys: SchurSystem, x, y, t_list=(1e-3, 5e-4), tol: float = 1e-5) -> CheckReport:
    """Compare Richardson-extrapolated ``(T_t(x^*y) - T_t(x)^*T_t(y)) / 2t`` with Gamma."""
    x = _square(sys, x)
    y = _square(sys, y)

    def quotient(t):
        return (apply_semigroup(sys, t, adjoint(x) @ y) - adjoint(apply_semigroup(sys, t, x)) @ apply_semigroup(sys, t, y)) / (2 * t)

    ts = sorted(t_list, reverse=True)
    vals = [quotient(t) for t in ts]
    # the quotient is analytic in t; the Lagrange interpolant through all
    # samples evaluated at t = 0 removes the terms of order < len(ts)
    est = sum(w * v for w, v in zip(lagrange_weights_at_zero(ts), vals))
    target = carre_du_champ(sys, x, y)
    return check("gamma_limit", rel_residual(est, target), tol, system=sys.name, t=list(ts))


def gradient(sys: SchurSystem, fock: QFockSpace, x) -> np.ndarray:
    """``sum_ij x_ij s_q(alpha_i - alpha_j) (x) e_ij`` on ``Fock (x) l^2_I``."""
    if fock.h_dim != sys.h_dim:
        raise ValueError(f"Fock space is over dim {fock.h_dim}, system needs {sys.h_dim}")
    x = _square(sys, x)
    n = sys.index_count
    out = np.zeros((fock.total_dim * n, fock.total_dim * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if x[i, j] != 0 and sys.symbol[i, j] > 0:
                unit = np.zeros((n, n))
                unit[i, j] = 1.0
                out += x[i, j] * np.kron(s_q(fock, sys.difference(i, j)), unit)
    return out


def ampliate(fock: QFockSpace, x) -> np.ndarray:
    """``1 (x) x`` on ``Fock (x) l^2_I``."""
    return np.kron(np.eye(fock.total_dim), as_matrix(x))


def conditional_expectation(fock: QFockSpace, z, n: int | None = None) -> np.ndarray:
    """``(tau (x) id)(z)``: the vacuum-vacuum block of ``z``."""
    z = as_matrix(z)
    if n is None:
        n = z.shape[0] // fock.total_dim
    if z.shape != (fock.total_dim * n, fock.total_dim * n):
        raise ValueError(f"operator of shape {z.shape} does not live on Fock (x) l^2_{n}")
    return z[:n, :n].copy()


def trace_pairing(fock: QFockSpace, z, n: int) -> complex:
    """``(tau (x) tr)(z)``."""
    return complex(np.trace(conditional_expectation(fock, z, n)))


def riesz_transform(sys: SchurSystem, h, x) -> np.ndarray:
    h = np.asarray(h, dtype=float).ravel()
    if h.size != sys.h_dim:
        raise ValueError("direction has the wrong dimension")
    x = _square(sys, x)
    d = sys.alpha[:, None, :] - sys.alpha[None, :, :]
    norms = np.sqrt(sys.symbol)
    mult = np.zeros_like(norms)
    mask = ~sys.kernel_mask()
    mult[mask] = (d @ h)[mask] / norms[mask]
    return mult * x


def riesz_square_function(sys: SchurSystem, x, p: float) -> float:
    """``max`` of the column and row square functions of the Riesz transforms in ``S^p``."""
    if p < 2:
        raise NotImplementedError("the square function is only provided for p >= 2")
    x = _square(sys, x)
    col = np.zeros_like(x)
    row = np.zeros_like(x)
    for k in range(sys.h_dim):
        r = riesz_transform(sys, np.eye(sys.h_dim)[k], x)
        col += adjoint(r) @ r
        row += r @ adjoint(r)
    return max(schatten_norm(mat_sqrt_psd(col), p), schatten_norm(mat_sqrt_psd(row), p))


def distinct_differences(sys: SchurSystem, decimals: int = 9) -> np.ndarray:
    """The set ``{alpha_i - alpha_j}`` with duplicates removed."""
    d = (sys.alpha[:, None, :] - sys.alpha[None, :, :]).reshape(-1, sys.h_dim)
    scale = max(float(np.abs(d).max(initial=0.0)), 1.0)
    keys = np.round(d / scale, decimals)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return d[np.sort(idx)]


def min_positive_sq_distance(points: np.ndarray, rel_zero: float = 1e-12, chunk: int = 2048) -> float:
    """Smallest nonzero squared distance between rows of ``points`` (``inf`` if none)."""
    n = points.shape[0]
    if n < 2:
        return np.inf
    scale = max(float(np.sum(points**2, axis=1).max()), 1.0)
    best = np.inf
    for start in range(0, n, chunk):
        blk = points[start : start + chunk]
        d2 = np.sum((blk[:, None, :] - points[None, :, :]) ** 2, axis=2)
        d2 = d2[d2 > rel_zero * scale]
        if d2.size:
            best = min(best, float(d2.min()))
    return best


def gap(sys: SchurSystem) -> float:
    """Infimum of ``||(alpha_i - alpha_j) - (alpha_k - alpha_l)||^2`` over distinct differences."""
    if sys.index_count > MAX_GAP_INDICES:
        raise RuntimeError(f"gap enumeration limited to {MAX_GAP_INDICES} indices")
    return min_positive_sq_distance(distinct_differences(sys))


def counting_bound_check(sys: SchurSystem, k_max: int, rel: float = 1e-9) -> CheckReport:
    """Shell cardinalities of the difference set against ``(5^n - 1) k^(n-1)``."""
    g = gap(sys)
    if not (g > 0 and np.isfinite(g)):
        raise ValueError("counting bound needs a finite positive gap")
    n = sys.h_dim
    diffs = distinct_differences(sys)
    sq = np.sum(diffs**2, axis=1)
    counts, bounds = [], []
    for k in range(1, k_max + 1):
        lo, hi = k * k * g, (k + 1) ** 2 * g
        counts.append(int(np.sum((sq >= lo * (1 - rel)) & (sq <= hi * (1 + rel)))))
        bounds.append((5**n - 1) * k ** (n - 1))
    excess = max((c - b for c, b in zip(counts, bounds)), default=0)
    return check(
        "counting_bound",
        max(excess, 0),
        0.0,
        system=sys.name,
        gap=g,
        counts=counts,
        bounds=bounds,
    )


# -- gradient system -------------------------------------------------------


def gradient_system(sys: SchurSystem, fock: QFockSpace) -> GradientSystem:
    """Flattened ``(A, grad, grad^*)`` for the Schur flavour.

    Source vectors are row-major flattenings of ``x``. A carrier operator ``z``
    on ``Fock (x) l^2_I`` is stored through its GNS image, the
    ``(F n) x n`` matrix ``z (Omega (x) I)`` flattened row-major; its squared
    norm is ``(tau (x) tr)(z^* z)``.
    """
    if fock.h_dim != sys.h_dim:
        raise ValueError("Fock space and system disagree on dim H")
    n = sys.index_count
    F = fock.total_dim
    vac_cols = np.zeros((F * n, n), dtype=complex)
    vac_cols[:n, :n] = np.eye(n)

    def to_mat(v):
        return np.asarray(v, dtype=complex).reshape(n, n)

    def gns(z):
        return (as_matrix(z) @ vac_cols).ravel()

    def grad_operator(v):
        return gradient(sys, fock, to_mat(v))

    grad = np.zeros((F * n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if sys.symbol[i, j] > 0:
                col = s_q(fock, sys.difference(i, j))[:, 0]
                w = np.zeros((F * n, n), dtype=complex)
                w[i::n, j] = col
                grad[:, i * n + j] = w.ravel()

    embed = np.zeros((F * n * n, n * n), dtype=complex)
    embed[: n * n, :] = np.eye(n * n)

    generator = sys.symbol.ravel().astype(float)
    # Id (x) A multiplies the (i, j) entry of every Fock component by a_ij
    target_generator = np.tile(sys.symbol.ravel(), F).astype(float)

    def left_source(a):
        return np.kron(as_matrix(to_mat(a)), np.eye(n))

    def carrier_left(z):
        return np.kron(as_matrix(z), np.eye(n))

    def left_target(a):
        return carrier_left(np.kron(np.eye(F), to_mat(a)))

    def carrier_trace(z):
        return trace_pairing(fock, z, n)

    def source_lp_norm(v, p):
        return schatten_norm(to_mat(v), p)

    def carrier_lp_norm(z, p):
        return carrier_lp(fock, z, n, p)

    def gamma_norm(v, p):
        return gamma_seminorm(sys, to_mat(v), p)

    def random_source(rng):
        return (rng.standard_normal(n * n) + 1j * rng.standard_normal(n * n))

    def random_carrier(rng):
        z = np.kron(np.eye(F), rng.standard_normal((n, n)) + 0j)
        for _ in range(2):
            h = rng.standard_normal(sys.h_dim)
            z = z + np.kron(s_q(fock, h), rng.standard_normal((n, n)))
        return z

    return GradientSystem(
        name=sys.name,
        grad=grad,
        generator=generator,
        target_generator=target_generator,
        embed=embed,
        left_source=left_source,
        left_target=left_target,
        grad_operator=grad_operator,
        carrier_left=carrier_left,
        gns=gns,
        carrier_trace=carrier_trace,
        carrier_dim=F * n,
        random_carrier=random_carrier,
        source_adjoint=lambda v: adjoint(to_mat(v)).ravel(),
        source_product=lambda u, v: (to_mat(u) @ to_mat(v)).ravel(),
        source_lp_norm=source_lp_norm,
        carrier_lp_norm=carrier_lp_norm,
        source_op_norm=lambda v: op_norm(to_mat(v)),
        gamma_norm=gamma_norm,
        random_source=random_source,
        params={"flavour": "schur", "system": sys.name, "q": fock.q, "level_cap": fock.level_cap},
    )


def carrier_lp(fock: QFockSpace, z, n: int, p: float) -> tuple[float, bool]:
    """``((tau (x) tr)|z|^p)^{1/p}`` computed on the truncated Fock space.

    Returns the value and whether the truncation makes it exact: always for
    ``q = -1`` with the full exterior algebra, and for even integer ``p`` when
    ``(z^* z)^{p/2}`` stays within the exact word length.
    """
    z = as_matrix(z)
    zz = adjoint(z) @ z
    if float(p).is_integer() and int(p) % 2 == 0:
        power = np.linalg.matrix_power(zz, int(p) // 2)
    else:
        power = psd_power(zz, p / 2)
    val = float(np.real(np.trace(power[:n, :n])))
    full_exterior = fock.q == -1 and fock.level_cap >= fock.h_dim
    exact = full_exterior or (float(p).is_integer() and int(p) % 2 == 0 and p <= fock.exact_word_length)
    return max(val, 0.0) ** (1.0 / p), exact


def gamma_seminorm(sys: SchurSystem, x, p: float) -> float:
    """``max(||Gamma(x,x)^{1/2}||_p, ||Gamma(x^*,x^*)^{1/2}||_p)``."""
    if p < 2:
        raise NotImplementedError("the Gamma seminorm is only provided for p >= 2")
    x = _square(sys, x)
    a = mat_sqrt_psd(carre_du_champ(sys, x, x))
    b = mat_sqrt_psd(carre_du_champ(sys, adjoint(x), adjoint(x)))
    return max(schatten_norm(a, p), schatten_norm(b, p))


def gamma_identity_check(sys: SchurSystem, fock: QFockSpace, samples: int = 5, seed: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    """Three-way agreement of the definition, the matrix-unit form and ``E(grad^* grad)``."""
    rng = np.random.default_rng(seed)
    n = sys.index_count
    parts: list[CheckReport] = []
    worst_def_entries = worst_def_grad = worst_inner = 0.0
    for _ in range(samples):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        g = carre_du_champ(sys, x, y)
        worst_def_entries = max(worst_def_entries, rel_residual(g, carre_du_champ_entries(sys, x, y)))
        worst_inner = max(worst_inner, rel_residual(g, carre_du_champ_inner(sys, x, y)))
        e = conditional_expectation(fock, adjoint(gradient(sys, fock, x)) @ gradient(sys, fock, y), n)
        worst_def_grad = max(worst_def_grad, rel_residual(g, e))
    parts.append(check("gamma_def_vs_entries", worst_def_entries, tol))
    parts.append(check("gamma_def_vs_expectation", worst_def_grad, tol))
    parts.append(check("gamma_def_vs_inner_product", worst_inner, tol))
    out = merge("gamma_three_way", parts, system=sys.name, q=fock.q)
    out.seed = seed
    return out


def riesz_parseval_check(sys: SchurSystem, samples: int = 10, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    """``sum_k ||R_k x||_2^2 = ||x||_2^2`` for ``x`` vanishing on ``ker A``."""
    rng = np.random.default_rng(seed)
    n = sys.index_count
    mask = sys.kernel_mask()
    worst = 0.0
    for _ in range(samples):
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        x[mask] = 0.0
        total = sum(np.linalg.norm(riesz_transform(sys, np.eye(sys.h_dim)[k], x)) ** 2 for k in range(sys.h_dim))
        ref = np.linalg.norm(x) ** 2
        worst = max(worst, abs(total - ref) / max(ref, 1e-300) if ref > 0 else abs(total))
        # the square-function norm at p = 2 carries the same identity
        worst = max(worst, abs(riesz_square_function(sys, x, 2.0) ** 2 - ref) / max(ref, 1e-300) if ref > 0 else 0.0)
    out = check("riesz_parseval", worst, tol, system=sys.name, samples=samples)
    out.seed = seed
    return out
