"""Finite groups with 1-cocycles, Fourier multipliers and crossed products.

Group elements are integer indices ``0 .. |G|-1``. A group algebra element is
its coefficient vector ``x = sum_s x_s lambda_s``. Complex cocycle spaces are
realified, ``C^d -> R^{2d}`` with ``(Re z_1, Im z_1, ...)``.

The crossed product ``Gamma_q(H) x| G`` acts on ``l^2(G) (x) Fock`` with the
group factor first (index ``r * F + f``); ``x x| lambda_s`` is
``pi(x) (lambda_s (x) Id)`` where ``pi(x)`` is block diagonal with block
``alpha_{r^{-1}}(x)`` at ``r``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .fock import QFockSpace, second_quantize, s_q
from .gradient import GradientSystem
from .linalg import adjoint, is_psd, mat_sqrt_psd, op_norm, psd_power, rel_residual
from .report import CheckReport, check, merge
from . import schur

MAX_ASSOC_ORDER = 64
MAX_GAP_ORDER = 256
MAX_CROSSED_DIM = 4096


@dataclass(frozen=True)
class FiniteGroup:
    table: np.ndarray
    name: str = "G"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @cached_property
    def identity(self) -> int:
        for e in range(self.order):
            if np.array_equal(self.table[e], np.arange(self.order)):
                return e
        raise ValueError("table has no identity element")

    @cached_property
    def inverse(self) -> np.ndarray:
        e = self.identity
        return np.array([int(np.nonzero(self.table[s] == e)[0][0]) for s in range(self.order)])

    def mul(self, s: int, t: int) -> int:
        return int(self.table[s, t])

    def left_regular(self, s: int) -> np.ndarray:
        """Permutation matrix of ``lambda_s``: ``delta_r -> delta_{sr}``."""
        n = self.order
        m = np.zeros((n, n))
        m[self.table[s], np.arange(n)] = 1.0
        return m

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist()}


def make_group(table, name: str = "G") -> FiniteGroup:
    t = np.asarray(table, dtype=int)
    n = t.shape[0]
    if t.shape != (n, n) or n == 0:
        raise ValueError("multiplication table must be a nonempty square")
    rng = np.arange(n)
    for row in t:
        if not np.array_equal(np.sort(row), rng):
            raise ValueError("table is not a Latin square")
    for col in t.T:
        if not np.array_equal(np.sort(col), rng):
            raise ValueError("table is not a Latin square")
    g = FiniteGroup(t, name)
    g.identity  # noqa: B018 - raises when there is none
    if n <= MAX_ASSOC_ORDER:
        # (st)u == s(tu) for all triples
        left = t[t[:, :, None], np.arange(n)[None, None, :]]
        right = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            raise ValueError("table is not associative")
    return g


def cyclic_group(n: int) -> FiniteGroup:
    r = np.arange(n)
    return make_group((r[:, None] + r[None, :]) % n, f"Z{n}")


def abelian_group(orders) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """``Z_{n_1} x ... x Z_{n_k}`` and the tuple label of each element index."""
    orders = tuple(int(o) for o in orders)
    elems = list(np.ndindex(*orders))
    index = {e: i for i, e in enumerate(elems)}
    table = np.zeros((len(elems), len(elems)), dtype=int)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[tuple((x + y) % o for x, y, o in zip(a, b, orders))]
    name = "x".join(f"Z{o}" for o in orders)
    return make_group(table, name), elems


def group_from_json(obj: dict) -> FiniteGroup:
    g = make_group(obj["table"], obj.get("name", "G"))
    if "order" in obj and int(obj["order"]) != g.order:
        raise ValueError("declared order does not match the table")
    return g


@dataclass(frozen=True)
class GroupCocycleSystem:
    group: FiniteGroup
    pi: np.ndarray
    b: np.ndarray
    name: str = "cocycle"

    @property
    def h_dim(self) -> int:
        return self.b.shape[1]

    @cached_property
    def psi(self) -> np.ndarray:
        return np.sum(self.b**2, axis=1)

    def check(self, tol: float = 1e-10) -> CheckReport:
        g = self.group
        n = g.order
        scale = max(1.0, float(np.abs(self.b).max(initial=0.0)))
        hom = cocycle = 0.0
        for s in range(n):
            for t in range(n):
                st = g.mul(s, t)
                hom = max(hom, float(np.abs(self.pi[s] @ self.pi[t] - self.pi[st]).max()))
                cocycle = max(cocycle, float(np.abs(self.b[st] - self.b[s] - self.pi[s] @ self.b[t]).max()) / scale)
        orth = max(float(np.abs(p.T @ p - np.eye(self.h_dim)).max()) for p in self.pi)
        sym = float(np.abs(self.psi - self.psi[g.inverse]).max()) / scale**2
        parts = [
            check("pi_homomorphism", hom, tol),
            check("pi_orthogonal", orth, tol),
            check("cocycle_law", cocycle, tol),
            check("psi_identity_zero", abs(self.psi[g.identity]) / scale**2, tol),
            check("psi_symmetric", sym, tol),
            cnd_check(g, self.psi, 1e-9),
        ]
        return merge("cocycle_invariants", parts, system=self.name)


def _validated(sys: GroupCocycleSystem, tol: float = 1e-10) -> GroupCocycleSystem:
    rep = sys.check(tol)
    if not rep.passed:
        raise ValueError(f"cocycle data for {sys.name} fails: {rep.params.get('failing')}")
    return sys


def cnd_check(group: FiniteGroup, psi, tol: float = 1e-9) -> CheckReport:
    """Conditional negative definiteness of ``psi`` on zero-sum coefficient vectors.

    ``-[psi(s_j^{-1} s_i)]`` is compressed to the zero-sum hyperplane and must
    be PSD there.
    """
    psi = np.asarray(psi, dtype=float)
    n = group.order
    if n == 1:
        return check("conditionally_negative", 0.0, tol, order=1)
    kernel = np.array([[psi[group.mul(group.inverse[j], i)] for j in range(n)] for i in range(n)])
    # orthonormal basis of {c : sum c = 0}
    basis = np.linalg.qr(np.eye(n)[:, 1:] - 1.0 / n)[0]
    comp = -(basis.T @ kernel @ basis)
    comp = 0.5 * (comp + comp.T)
    w = np.linalg.eigvalsh(comp)
    scale = max(1.0, float(np.abs(psi).max()))
    return check("conditionally_negative", max(0.0, -float(w.min())) / scale, tol, order=n, min_eigenvalue=float(w.min()))


# -- cocycle constructions -------------------------------------------------


def build_cocycle_regular(group: FiniteGroup, xi, name: str | None = None) -> GroupCocycleSystem:
    """Left-regular representation on ``l^2_G`` with ``b(s) = lambda_s xi - xi``."""
    xi = np.asarray(xi, dtype=float).ravel()
    if xi.size != group.order:
        raise ValueError("xi must be a vector on l^2(G)")
    pi = np.stack([group.left_regular(s) for s in range(group.order)])
    b = np.stack([p @ xi - xi for p in pi])
    for s in range(group.order):
        if s != group.identity and np.allclose(b[s], 0.0, atol=1e-12):
            raise ValueError(f"xi is fixed by element {s}")
    return _validated(GroupCocycleSystem(group, pi, b, name or f"regular:{group.name}"))


def _rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def build_cocycle_donut(N: int, p_num: int, q_num: int) -> GroupCocycleSystem:
    """``Z_N`` with ``b(n) = (e^{2 pi i p n/N}, e^{2 pi i q n/N}) - (1, 1)`` in ``C^2 = R^4``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    g = cyclic_group(N)
    pi, b = [], []
    for n in range(N):
        ta, tb = 2 * np.pi * p_num * n / N, 2 * np.pi * q_num * n / N
        pi.append(np.block([[_rot(ta), np.zeros((2, 2))], [np.zeros((2, 2)), _rot(tb)]]))
        b.append(np.array([np.cos(ta) - 1, np.sin(ta), np.cos(tb) - 1, np.sin(tb)]))
    return _validated(GroupCocycleSystem(g, np.stack(pi), np.stack(b), f"donut:{N}:{p_num}:{q_num}"))


def build_cocycle_levy(orders, weights, name: str | None = None) -> GroupCocycleSystem:
    """Cocycle of a Levy measure ``mu`` on the nontrivial characters of a finite abelian group.

    ``weights`` has the shape of ``orders``; entry ``j`` is ``mu(chi_j)`` with
    ``chi_j(k) = exp(2 pi i sum_m j_m k_m / n_m)``. The space is
    ``l^2(characters, mu/2)`` realified, ``b(s)(chi) = 1 - chi(s)`` and
    ``pi_s`` multiplies by ``chi(s)``, so ``||b(s)||^2 = sum mu(chi)(1 - Re chi(s))``.
    """
    if np.isscalar(orders):
        orders = (int(orders),)
    orders = tuple(int(o) for o in orders)
    w = np.asarray(weights, dtype=float).reshape(orders)
    if np.any(w < 0):
        raise ValueError("Levy weights must be nonnegative")
    zero = (0,) * len(orders)
    if w[zero] != 0:
        raise ValueError("the trivial character carries no Levy weight")
    for j in np.ndindex(*orders):
        conj = tuple((-a) % o for a, o in zip(j, orders))
        if not np.isclose(w[j], w[conj], rtol=1e-12, atol=1e-15):
            raise ValueError(f"weights are not symmetric under conjugation at {j}")
    group, elems = abelian_group(orders)
    chars = [j for j in np.ndindex(*orders) if w[j] > 0]
    n = group.order
    if not chars:
        pi = np.ones((n, 1, 1))
        b = np.zeros((n, 1))
    else:
        pi = np.zeros((n, 2 * len(chars), 2 * len(chars)))
        b = np.zeros((n, 2 * len(chars)))
        for s, k in enumerate(elems):
            for c, j in enumerate(chars):
                theta = 2 * np.pi * sum(a * x / o for a, x, o in zip(j, k, orders))
                amp = np.sqrt(w[j] / 2)
                pi[s, 2 * c : 2 * c + 2, 2 * c : 2 * c + 2] = _rot(theta)
                b[s, 2 * c] = amp * (1 - np.cos(theta))
                b[s, 2 * c + 1] = -amp * np.sin(theta)
    return _validated(GroupCocycleSystem(group, pi, b, name or f"levy:{group.name}"))


def levy_length(orders, weights) -> np.ndarray:
    """``psi(s) = sum_chi (1 - Re chi(s)) mu(chi)`` evaluated directly."""
    if np.isscalar(orders):
        orders = (int(orders),)
    w = np.asarray(weights, dtype=float).reshape(orders)
    out = []
    for k in np.ndindex(*orders):
        total = 0.0
        for j in np.ndindex(*orders):
            theta = 2 * np.pi * sum(a * x / o for a, x, o in zip(j, k, orders))
            total += (1 - np.cos(theta)) * w[j]
        out.append(total)
    return np.array(out)


def cyclic_cosine_weights(n: int) -> np.ndarray:
    """Levy weights of ``psi_n(k) = n^2/(2 pi^2) (1 - cos(2 pi k / n))`` on ``Z_n``.

    The mass ``n^2 / (2 pi^2)`` sits on the conjugate pair ``{chi_1, chi_{n-1}}``,
    split evenly (one character when ``n = 2``).
    """
    w = np.zeros(n)
    mass = n**2 / (2 * np.pi**2)
    if n == 2:
        w[1] = mass
    elif n > 2:
        w[1] = w[n - 1] = mass / 2
    return w


def levy_weights_from_length(n: int, psi, tol: float = 1e-9) -> np.ndarray:
    """Invert ``psi(k) = sum_j mu_j (1 - cos(2 pi j k / n))`` on ``Z_n``."""
    psi = np.asarray(psi, dtype=float)
    hat = np.fft.fft(psi)
    mu = -np.real(hat) / n
    mu[0] = 0.0
    scale = max(1.0, float(np.abs(psi).max()))
    if np.any(mu < -tol * scale):
        raise ValueError("length is not conditionally negative definite")
    return np.clip(mu, 0.0, None)


def word_length_cocycle(n: int) -> GroupCocycleSystem:
    """``Z_n`` with the word length ``min(k, n - k)``, realised through its Levy measure."""
    psi = np.array([min(k, n - k) for k in range(n)], dtype=float)
    return build_cocycle_levy((n,), levy_weights_from_length(n, psi), f"Zn:{n}")


def cocycle_from_json(obj: dict, group: FiniteGroup | None = None, name: str = "file") -> GroupCocycleSystem:
    group = group or group_from_json(obj)
    pi = np.asarray(obj["pi"], dtype=float)
    b = np.asarray(obj["b"], dtype=float)
    if pi.shape[0] != group.order or b.shape[0] != group.order:
        raise ValueError("cocycle data must have one entry per group element")
    return _validated(GroupCocycleSystem(group, pi, b, name))


def cocycle_to_json(sys: GroupCocycleSystem) -> dict:
    out = sys.group.to_json()
    out.update({"pi": sys.pi.tolist(), "b": sys.b.tolist()})
    return out


def parse_cocycle(spec: str) -> GroupCocycleSystem:
    """``Zn:<n>``, ``donut:<N>:<p>:<q>``, ``levy:Zn:<w_1,...,w_{n-1}>``, ``regular:<n>`` or a JSON path."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "Zn" and len(parts) == 2:
        return word_length_cocycle(int(parts[1]))
    if kind == "donut" and len(parts) == 4:
        return build_cocycle_donut(int(parts[1]), int(parts[2]), int(parts[3]))
    if kind == "regular" and len(parts) == 2:
        g = cyclic_group(int(parts[1]))
        xi = np.zeros(g.order)
        xi[g.identity] = 1.0
        return build_cocycle_regular(g, xi, spec)
    if kind == "levy" and len(parts) == 3 and parts[1].startswith("Z"):
        w = [float(v) for v in parts[2].split(",") if v]
        n = int(parts[1][1:]) if parts[1][1:].isdigit() else len(w) + 1
        if len(w) == n:
            weights = np.asarray(w)
        elif len(w) == n - 1:
            weights = np.concatenate([[0.0], w])
        else:
            raise ValueError(f"expected {n - 1} weights for Z{n}")
        return build_cocycle_levy((n,), weights, spec)
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        return cocycle_from_json(json.loads(path.read_text()), name=spec)
    raise ValueError(f"unknown cocycle system {spec!r}")


# -- group algebra ---------------------------------------------------------


def group_adjoint(group: FiniteGroup, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return np.conj(x[group.inverse])


def convolve(group: FiniteGroup, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    out = np.zeros(group.order, dtype=complex)
    np.add.at(out, group.table.ravel(), np.outer(x, y).ravel())
    return out


def lambda_matrix(group: FiniteGroup, x) -> np.ndarray:
    """``lambda(x)`` on ``l^2(G)``."""
    x = np.asarray(x, dtype=complex)
    out = np.zeros((group.order, group.order), dtype=complex)
    for s in range(group.order):
        if x[s] != 0:
            out += x[s] * group.left_regular(s)
    return out


def group_trace(group: FiniteGroup, x) -> complex:
    return complex(np.asarray(x)[group.identity])


def vn_lp_norm(group: FiniteGroup, x, p: float) -> float:
    """Norm in ``L^p(VN(G))`` for the normalised trace."""
    m = lambda_matrix(group, x)
    if np.isinf(p):
        return op_norm(m)
    mm = adjoint(m) @ m
    val = float(np.real(np.trace(psd_power(mm, p / 2)))) / group.order
    return max(val, 0.0) ** (1.0 / p)


def unit(group: FiniteGroup, s: int) -> np.ndarray:
    v = np.zeros(group.order, dtype=complex)
    v[s] = 1.0
    return v


def apply_group_generator(sys: GroupCocycleSystem, x) -> np.ndarray:
    return sys.psi * np.asarray(x, dtype=complex)


def apply_group_semigroup(sys: GroupCocycleSystem, t: float, x) -> np.ndarray:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return np.exp(-t * sys.psi) * np.asarray(x, dtype=complex)


def herz_schur_check(sys: GroupCocycleSystem, times=(0.1, 1.0, 10.0)) -> CheckReport:
    """``[exp(-t psi(s^{-1} r))]_{s,r}`` is PSD for each sampled ``t``."""
    g = sys.group
    kern = np.array([[sys.psi[g.mul(g.inverse[s], r)] for r in range(g.order)] for s in range(g.order)])
    worst = 0.0
    for t in times:
        w = np.linalg.eigvalsh(np.exp(-t * kern))
        worst = max(worst, max(0.0, -float(w.min())))
    return check("herz_schur_positive", worst, 1e-9, system=sys.name, t=list(times))


def group_carre_du_champ(sys: GroupCocycleSystem, x, y) -> np.ndarray:
    """``(A(x^*) y + x^* A(y) - A(x^* y)) / 2`` with convolution products."""
    g = sys.group
    xs = group_adjoint(g, x)
    A = lambda v: apply_group_generator(sys, v)  # noqa: E731
    return 0.5 * (convolve(g, A(xs), y) + convolve(g, xs, A(y)) - A(convolve(g, xs, y)))


def group_carre_du_champ_closed(sys: GroupCocycleSystem, x, y) -> np.ndarray:
    """From ``Gamma(lambda_s, lambda_t) = (psi(s^-1) + psi(t) - psi(s^-1 t))/2 lambda_{s^-1 t}``."""
    g = sys.group
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    out = np.zeros(g.order, dtype=complex)
    psi = sys.psi
    for s in range(g.order):
        si = g.inverse[s]
        for t in range(g.order):
            r = g.mul(si, t)
            out[r] += np.conj(x[s]) * y[t] * 0.5 * (psi[si] + psi[t] - psi[r])
    return out


def group_carre_du_champ_cocycle(sys: GroupCocycleSystem, x, y) -> np.ndarray:
    """From ``Gamma(lambda_s, lambda_t) = -<b(s^-1), pi_{s^-1} b(t)> lambda_{s^-1 t}``."""
    g = sys.group
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    out = np.zeros(g.order, dtype=complex)
    for s in range(g.order):
        si = g.inverse[s]
        for t in range(g.order):
            val = -float(sys.b[si] @ (sys.pi[si] @ sys.b[t]))
            out[g.mul(si, t)] += np.conj(x[s]) * y[t] * val
    return out


# -- crossed product -------------------------------------------------------


class CrossedProduct:
    """Matrices of ``Gamma_q(H) x| G`` on ``l^2(G) (x) Fock``."""

    def __init__(self, sys: GroupCocycleSystem, fock: QFockSpace):
        if fock.h_dim != sys.h_dim:
            raise ValueError(f"Fock space is over dim {fock.h_dim}, cocycle needs {sys.h_dim}")
        if sys.group.order * fock.total_dim > MAX_CROSSED_DIM:
            raise RuntimeError("crossed product exceeds the dimension budget")
        self.sys = sys
        self.fock = fock
        self.group = sys.group
        self.F = fock.total_dim
        self.dim = self.group.order * self.F
        self.quantized = [second_quantize(fock, sys.pi[s]) for s in range(self.group.order)]
        self._lam = [np.kron(self.group.left_regular(s), np.eye(self.F)) for s in range(self.group.order)]

    def action(self, s: int, x: np.ndarray) -> np.ndarray:
        """``alpha_s(x) = F_q(pi_s) x F_q(pi_s)^*``."""
        u = self.quantized[s]
        return u @ x @ adjoint(u)

    def pi(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for r in range(self.group.order):
            sl = slice(r * self.F, (r + 1) * self.F)
            out[sl, sl] = self.action(self.group.inverse[r], x)
        return out

    def lam(self, s: int) -> np.ndarray:
        return self._lam[s]

    def embed(self, x: np.ndarray, s: int) -> np.ndarray:
        """``x x| lambda_s``."""
        return self.pi(x) @ self._lam[s]

    def group_element(self, a) -> np.ndarray:
        """``sum_s a_s (1 x| lambda_s)``."""
        a = np.asarray(a, dtype=complex)
        return np.kron(lambda_matrix(self.group, a), np.eye(self.F))

    def vacuum_column(self) -> int:
        return self.group.identity * self.F

    def trace(self, z: np.ndarray) -> complex:
        return crossed_trace(z, self.group.order)

    def expectation(self, z: np.ndarray) -> np.ndarray:
        """Coefficients of the conditional expectation onto the group algebra."""
        return np.array([self.trace(z @ adjoint(self._lam[s])) for s in range(self.group.order)])


def crossed_product_embed(sys: GroupCocycleSystem, fock: QFockSpace, x, s: int) -> np.ndarray:
    return CrossedProduct(sys, fock).embed(np.asarray(x, dtype=complex), s)


def crossed_trace(z, order: int) -> complex:
    """Vacuum pairing averaged over the ``l^2(G)`` diagonal."""
    z = np.asarray(z)
    F = z.shape[0] // order
    return complex(np.mean([z[r * F, r * F] for r in range(order)]))


def group_gradient(sys: GroupCocycleSystem, fock: QFockSpace, x, cp: CrossedProduct | None = None) -> np.ndarray:
    """``sum_s x_s (s_q(b(s)) x| lambda_s)``."""
    cp = cp or CrossedProduct(sys, fock)
    x = np.asarray(x, dtype=complex)
    out = np.zeros((cp.dim, cp.dim), dtype=complex)
    for s in range(sys.group.order):
        if x[s] != 0 and sys.psi[s] > 0:
            out += x[s] * cp.embed(s_q(fock, sys.b[s]), s)
    return out


# -- gaps ------------------------------------------------------------------


def gap_psi(sys: GroupCocycleSystem) -> float:
    """Infimum of ``||b(s) - b(t)||^2`` over ``b(s) != b(t)``."""
    if sys.group.order > MAX_GAP_ORDER:
        raise RuntimeError(f"gap enumeration limited to order {MAX_GAP_ORDER}")
    return schur.min_positive_sq_distance(sys.b)


def gap_comparison(sys: GroupCocycleSystem, tol: float = 1e-12) -> tuple[float, float, CheckReport]:
    """Gap of the Herz-Schur family ``alpha_s = b(s)`` against the cocycle gap."""
    if sys.group.order > schur.MAX_GAP_INDICES:
        raise RuntimeError(f"gap comparison limited to order {schur.MAX_GAP_INDICES}")
    g_alpha = schur.gap(schur.SchurSystem(sys.b, f"herz-schur:{sys.name}"))
    g_psi = gap_psi(sys)
    if np.isinf(g_alpha) and np.isinf(g_psi):
        excess = 0.0
    else:
        excess = max(0.0, g_alpha - g_psi)
    rep = check("gap_inequality", excess, tol, system=sys.name, g_alpha=g_alpha, g_psi=g_psi, strict=bool(g_alpha < g_psi))
    rep.value = {"g_alpha": g_alpha, "g_psi": g_psi}
    return g_alpha, g_psi, rep


# -- gradient system -------------------------------------------------------


def gradient_system(sys: GroupCocycleSystem, fock: QFockSpace) -> GradientSystem:
    """Flattened ``(A, grad, grad^*)`` for the Fourier flavour.

    Source vectors are group-algebra coefficients. A crossed-product element
    ``z`` is stored as ``z (delta_e (x) Omega)``.
    """
    cp = CrossedProduct(sys, fock)
    g = sys.group
    n = g.order
    F = cp.F
    col = cp.vacuum_column()

    def gns(z):
        return np.asarray(z, dtype=complex)[:, col].copy()

    grad = np.zeros((cp.dim, n), dtype=complex)
    for s in range(n):
        if sys.psi[s] > 0:
            grad[:, s] = gns(cp.embed(s_q(fock, sys.b[s]), s))
    embed = np.zeros((cp.dim, n), dtype=complex)
    for s in range(n):
        embed[s * F, s] = 1.0

    def random_carrier(rng):
        z = np.zeros((cp.dim, cp.dim), dtype=complex)
        for s in range(n):
            x = rng.standard_normal() * np.eye(F) + s_q(fock, rng.standard_normal(sys.h_dim))
            z += (rng.standard_normal() + 1j * rng.standard_normal()) * cp.embed(x, s)
        return z

    def carrier_lp_norm(z, p):
        zz = adjoint(z) @ z
        if float(p).is_integer() and int(p) % 2 == 0:
            power = np.linalg.matrix_power(zz, int(p) // 2)
        else:
            power = psd_power(zz, p / 2)
        val = float(np.real(crossed_trace(power, n)))
        full_exterior = fock.q == -1 and fock.level_cap >= fock.h_dim
        exact = full_exterior or (float(p).is_integer() and int(p) % 2 == 0 and p <= fock.exact_word_length)
        return max(val, 0.0) ** (1.0 / p), exact

    return GradientSystem(
        name=sys.name,
        grad=grad,
        generator=sys.psi.astype(float),
        target_generator=np.repeat(sys.psi, F).astype(float),
        embed=embed,
        left_source=lambda a: lambda_matrix(g, a),
        left_target=cp.group_element,
        grad_operator=lambda a: group_gradient(sys, fock, a, cp),
        carrier_left=lambda z: np.asarray(z, dtype=complex),
        gns=gns,
        carrier_trace=cp.trace,
        carrier_dim=cp.dim,
        random_carrier=random_carrier,
        source_adjoint=lambda v: group_adjoint(g, v),
        source_product=lambda u, v: convolve(g, u, v),
        source_lp_norm=lambda v, p: vn_lp_norm(g, v, p),
        carrier_lp_norm=carrier_lp_norm,
        source_op_norm=lambda v: op_norm(lambda_matrix(g, v)),
        gamma_norm=lambda v, p: group_gamma_seminorm(sys, v, p),
        random_source=lambda rng: rng.standard_normal(n) + 1j * rng.standard_normal(n),
        params={"flavour": "fourier", "system": sys.name, "q": fock.q, "level_cap": fock.level_cap},
    )


def group_gamma_seminorm(sys: GroupCocycleSystem, x, p: float) -> float:
    if p < 2:
        raise NotImplementedError("the Gamma seminorm is only provided for p >= 2")
    g = sys.group
    xs = group_adjoint(g, x)
    vals = []
    for v in (x, xs):
        gam = lambda_matrix(g, group_carre_du_champ(sys, v, v))
        root = mat_sqrt_psd(gam)
        if np.isinf(p):
            vals.append(op_norm(root))
        else:
            w = np.clip(np.linalg.eigvalsh(0.5 * (gam + adjoint(gam))), 0.0, None)
            vals.append((float(np.sum(w ** (p / 2))) / g.order) ** (1.0 / p))
    return max(vals)


def group_gamma_check(sys: GroupCocycleSystem, fock: QFockSpace, samples: int = 5, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Definition vs both closed forms vs ``E((grad x)^* grad y)``."""
    cp = CrossedProduct(sys, fock)
    rng = np.random.default_rng(seed)
    n = sys.group.order
    w_closed = w_cocycle = w_grad = 0.0
    for _ in range(samples):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        gam = group_carre_du_champ(sys, x, y)
        w_closed = max(w_closed, rel_residual(gam, group_carre_du_champ_closed(sys, x, y)))
        w_cocycle = max(w_cocycle, rel_residual(gam, group_carre_du_champ_cocycle(sys, x, y)))
        e = cp.expectation(adjoint(group_gradient(sys, fock, x, cp)) @ group_gradient(sys, fock, y, cp))
        w_grad = max(w_grad, rel_residual(gam, e))
    parts = [
        check("gamma_def_vs_closed", w_closed, tol),
        check("gamma_def_vs_cocycle_form", w_cocycle, tol),
        check("gamma_def_vs_expectation", w_grad, tol),
    ]
    out = merge("group_gamma_three_way", parts, system=sys.name, q=fock.q)
    out.seed = seed
    return out


def levy_check(n: int, tol: float = 1e-12) -> CheckReport:
    """Levy construction on ``Z_n`` reproduces ``n^2/(2 pi^2)(1 - cos(2 pi k/n))``."""
    w = cyclic_cosine_weights(n)
    sys = build_cocycle_levy((n,), w, f"levy:Z{n}")
    k = np.arange(n)
    target = n**2 / (2 * np.pi**2) * (1 - np.cos(2 * np.pi * k / n))
    g = sys.group
    law = 0.0
    for s in range(n):
        for t in range(n):
            law = max(law, float(np.abs(sys.b[g.mul(s, t)] - sys.b[s] - sys.pi[s] @ sys.b[t]).max()))
    scale = max(1.0, float(target.max()))
    parts = [
        check("levy_cocycle_law", law / np.sqrt(scale), tol),
        check("levy_psi_is_norm_b", float(np.abs(sys.psi - levy_length((n,), w)).max()) / scale, tol),
        check("levy_matches_cosine_length", float(np.abs(sys.psi - target).max()) / scale, tol),
    ]
    return merge("levy_construction", parts, n=n)

