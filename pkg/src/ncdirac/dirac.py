"""Hodge-Dirac operators built from a gradient system.

Type I is the block operator ``[[0, grad^*], [grad, 0]]`` on
``source (+) target``, either on the full target or on the closed range of the
gradient. Type II multiplies the Fock part of each matrix-unit (or group)
component by a q-Gaussian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import QFockSpace, s_q
from .fourier import CrossedProduct, GroupCocycleSystem
from .gradient import GradientSystem
from .linalg import adjoint, null_basis, op_norm, range_basis, range_projector, rel_residual
from .report import CheckReport, check, merge
from .schur import SchurSystem

ADJOINT_TOL = 1e-9
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class HodgeDirac:
    grad_sys: GradientSystem
    block_matrix: np.ndarray
    restricted: bool = False
    range_basis: np.ndarray | None = field(default=None, repr=False)

    @property
    def source_dim(self) -> int:
        return self.grad_sys.source_dim

    @property
    def dim(self) -> int:
        return self.block_matrix.shape[0]

    @property
    def grad_block(self) -> np.ndarray:
        return self.block_matrix[self.source_dim :, : self.source_dim]

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.block_matrix)

    def grading(self) -> np.ndarray:
        """``diag(-Id, Id)`` on ``source (+) target``."""
        g = np.ones(self.dim)
        g[: self.source_dim] = -1.0
        return np.diag(g)


@dataclass(frozen=True)
class DiracII:
    carrier: np.ndarray
    name: str = "dirac2"
    exact_square: bool = False

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return rel_residual(self.carrier, adjoint(self.carrier)) <= tol


def _blocks(grad: np.ndarray) -> np.ndarray:
    m, n = grad.shape
    out = np.zeros((n + m, n + m), dtype=complex)
    out[n:, :n] = grad
    out[:n, n:] = adjoint(grad)
    return out


def assemble_hodge_dirac(gs: GradientSystem, restricted: bool = False, check_adjoint: bool = True) -> HodgeDirac:
    """Block operator on ``source (+) target`` or on ``source (+) closure(ran grad)``."""
    if check_adjoint:
        res = gs.adjointness_residual()
        if res > ADJOINT_TOL:
            raise ValueError(f"gradient adjointness residual {res:.3e} exceeds {ADJOINT_TOL}")
    if restricted:
        q = range_basis(gs.grad)
        d = HodgeDirac(gs, _blocks(adjoint(q) @ gs.grad), True, q)
    else:
        d = HodgeDirac(gs, _blocks(gs.grad))
    if rel_residual(d.block_matrix, adjoint(d.block_matrix)) > HERMITIAN_TOL:
        raise ValueError("assembled operator is not Hermitian")
    return d


def verify_square(gs: GradientSystem, tol: float = 1e-9) -> CheckReport:
    """``D^2 = diag(grad^* grad, grad grad^*)``, ``grad^* grad = A`` and ``grad grad^* = B`` on the range."""
    d = assemble_hodge_dirac(gs, check_adjoint=False)
    g = gs.grad
    n = gs.source_dim
    sq = d.block_matrix @ d.block_matrix
    diag = np.zeros_like(sq)
    diag[:n, :n] = adjoint(g) @ g
    diag[n:, n:] = g @ adjoint(g)
    parts = [
        check("dirac_square_diagonal", rel_residual(sq, diag), tol),
        check("generator_is_grad_star_grad", rel_residual(adjoint(g) @ g, np.diag(gs.generator)), tol),
        # B = Id (x) A agrees with grad grad^* on the range of grad
        check("target_generator_on_range", rel_residual(g @ adjoint(g) @ g, gs.target_generator[:, None] * g), tol),
    ]
    r = assemble_hodge_dirac(gs, restricted=True, check_adjoint=False)
    q = r.range_basis
    rsq = r.block_matrix @ r.block_matrix
    rdiag = np.zeros_like(rsq)
    rdiag[:n, :n] = np.diag(gs.generator)
    rdiag[n:, n:] = adjoint(q) @ (gs.target_generator[:, None] * q)
    parts.append(check("restricted_square_is_diag_A_B", rel_residual(rsq, rdiag), tol))
    return merge("verify_square", parts, **gs.params)


def full_vs_restricted_check(gs: GradientSystem, tol: float = 1e-9) -> CheckReport:
    """The full operator kills ``ker grad^*`` and agrees with the restricted one on ``source (+) ran grad``."""
    full = assemble_hodge_dirac(gs, check_adjoint=False)
    res = assemble_hodge_dirac(gs, restricted=True, check_adjoint=False)
    n = gs.source_dim
    q = res.range_basis
    embed = np.zeros((full.dim, res.dim), dtype=complex)
    embed[:n, :n] = np.eye(n)
    embed[n:, n:] = q
    agree = rel_residual(adjoint(embed) @ full.block_matrix @ embed, res.block_matrix)
    co = null_basis(adjoint(gs.grad)) if gs.target_dim else np.zeros((0, 0))
    kill = 0.0
    if co.size:
        lifted = np.zeros((full.dim, co.shape[1]), dtype=complex)
        lifted[n:] = co
        kill = float(np.linalg.norm(full.block_matrix @ lifted)) / max(1.0, np.linalg.norm(full.block_matrix))
    parts = [check("restriction_agrees", agree, tol), check("cokernel_annihilated", kill, tol)]
    return merge("full_vs_restricted", parts, **gs.params)


def verify_resolvent(gs: GradientSystem, t: float, tol: float = 1e-8) -> CheckReport:
    """Closed-form inverse of ``Id - i t D`` on ``source (+) closure(ran grad)``."""
    if t == 0:
        raise ValueError("t must be nonzero")
    d = assemble_hodge_dirac(gs, restricted=True, check_adjoint=False)
    n = gs.source_dim
    q = d.range_basis
    g = adjoint(q) @ gs.grad
    R = np.diag(1.0 / (1.0 + t**2 * gs.generator))
    Rp = adjoint(q) @ ((1.0 / (1.0 + t**2 * gs.target_generator))[:, None] * q)
    cand = np.block([[R, 1j * t * R @ adjoint(g)], [1j * t * g @ R, Rp]])
    op = np.eye(d.dim) - 1j * t * d.block_matrix
    eye = np.eye(d.dim)
    parts = [
        check("resolvent_right_inverse", rel_residual(op @ cand, eye), tol),
        check("resolvent_left_inverse", rel_residual(cand @ op, eye), tol),
    ]
    return merge("verify_resolvent", parts, t=t, **gs.params)


def hodge_projections(gs: GradientSystem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Projections onto ``ran grad^*`` (source), ``ran grad`` (target) and ``ker D``."""
    d = assemble_hodge_dirac(gs, check_adjoint=False)
    n = gs.source_dim
    p_src = np.zeros((d.dim, d.dim), dtype=complex)
    p_src[:n, :n] = range_projector(adjoint(gs.grad))
    p_tgt = np.zeros((d.dim, d.dim), dtype=complex)
    p_tgt[n:, n:] = range_projector(gs.grad)
    k = null_basis(d.block_matrix)
    p_ker = k @ adjoint(k)
    return p_src, p_tgt, p_ker


def verify_hodge_decomposition(gs: GradientSystem, tol: float = 1e-9) -> CheckReport:
    ps = hodge_projections(gs)
    dim = ps[0].shape[0]
    parts = [
        check("projections_sum_to_identity", rel_residual(sum(ps), np.eye(dim)), tol),
    ]
    labels = ("ran_grad_star", "ran_grad", "ker_D")
    for a in range(3):
        parts.append(check(f"{labels[a]}_idempotent", rel_residual(ps[a] @ ps[a], ps[a]), tol))
        for b in range(a + 1, 3):
            parts.append(check(f"{labels[a]}_perp_{labels[b]}", float(np.linalg.norm(ps[a] @ ps[b])), tol))
    return merge("hodge_decomposition", parts, **gs.params)


def spectrum_check(gs: GradientSystem, tol: float = 1e-9) -> CheckReport:
    """Real spectrum symmetric about 0, and ``ker D^2 = ker D``."""
    d = assemble_hodge_dirac(gs, check_adjoint=False)
    ev = np.linalg.eigvals(d.block_matrix)
    scale = max(1.0, float(np.abs(ev).max(initial=0.0)))
    imag = float(np.abs(ev.imag).max(initial=0.0)) / scale
    real = np.sort(np.linalg.eigvalsh(d.block_matrix))
    sym = float(np.abs(real + real[::-1]).max(initial=0.0)) / scale
    k1 = null_basis(d.block_matrix)
    k2 = null_basis(d.block_matrix @ d.block_matrix, scale=scale)
    ker = rel_residual(k1 @ adjoint(k1), k2 @ adjoint(k2)) if k1.shape[1] == k2.shape[1] else np.inf
    r1 = range_projector(d.block_matrix)
    r2 = range_projector(d.block_matrix @ d.block_matrix)
    parts = [
        check("spectrum_real", imag, tol),
        check("spectrum_symmetric", sym, tol),
        check("kernel_of_square", ker, tol),
        check("range_of_square", rel_residual(r1, r2), tol),
    ]
    out = merge("dirac_spectrum", parts, **gs.params)
    out.value = real
    return out


def even_structure_check(gs: GradientSystem, samples: int = 2, seed: int = 0, tol: float = 1e-12) -> CheckReport:
    d = assemble_hodge_dirac(gs, check_adjoint=False)
    g = d.grading()
    rng = np.random.default_rng(seed)
    comm = 0.0
    for _ in range(samples):
        p = _pi(gs, gs.random_source(rng))
        comm = max(comm, rel_residual(g @ p, p @ g))
    parts = [
        check("grading_involution", rel_residual(g @ g, np.eye(d.dim)), tol),
        check("grading_anticommutes", rel_residual(g @ d.block_matrix, -d.block_matrix @ g), tol),
        check("grading_commutes_with_algebra", comm, tol),
    ]
    out = merge("even_structure", parts, **gs.params)
    out.seed = seed
    return out


def _pi(gs: GradientSystem, a) -> np.ndarray:
    """``diag(L_a, 1 (x) L_a)``."""
    n = gs.source_dim
    m = gs.target_dim
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = gs.left_source(a)
    out[n:, n:] = gs.left_target(a)
    return out


def commutator_hodge(gs: GradientSystem, a, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray, CheckReport]:
    """Off-diagonal blocks of ``[D, pi(a)]`` against ``L_{grad a} J`` and ``E L_{grad a}``."""
    a = np.asarray(a, dtype=complex).ravel()
    d = assemble_hodge_dirac(gs, check_adjoint=False)
    n = gs.source_dim
    p = _pi(gs, a)
    c = d.block_matrix @ p - p @ d.block_matrix
    lower_left = c[n:, :n]
    upper_right = c[:n, n:]
    l_da = gs.carrier_left(gs.grad_operator(a))
    expect_ll = l_da @ gs.embed
    expect_ur = adjoint(gs.embed) @ l_da
    scale = max(1.0, op_norm(l_da))
    diag_norm = max(float(np.linalg.norm(c[:n, :n])), float(np.linalg.norm(c[n:, n:])))
    parts = [
        check("commutator_lower_left", rel_residual(lower_left, expect_ll, scale), tol),
        check("commutator_upper_right", rel_residual(upper_right, expect_ur, scale), tol),
        check("commutator_diagonal_zero", diag_norm / scale, tol),
        check("commutator_norm_bound", max(0.0, op_norm(c) - op_norm(gs.grad_operator(a))) / scale, tol),
    ]
    return lower_left, upper_right, merge("commutator_hodge", parts, **gs.params)


def commutator_leibniz_check(gs: GradientSystem, samples: int = 3, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """``[D, pi(ab)] = pi(a)[D, pi(b)] + [D, pi(a)] pi(b)``."""
    d = assemble_hodge_dirac(gs, check_adjoint=False).block_matrix
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        a, b = gs.random_source(rng), gs.random_source(rng)
        pa, pb = _pi(gs, a), _pi(gs, b)
        pab = _pi(gs, gs.source_product(a, b))
        lhs = d @ pab - pab @ d
        rhs = pa @ (d @ pb - pb @ d) + (d @ pa - pa @ d) @ pb
        worst = max(worst, rel_residual(lhs, rhs))
    out = check("commutator_leibniz", worst, tol, **gs.params)
    out.seed = seed
    return out


def unit_commutator_bound(gs: GradientSystem, sys: SchurSystem, tol: float = 1e-9) -> CheckReport:
    """``||[D, pi(e_ij)]|| <= ||alpha_i - alpha_j||`` for every matrix unit."""
    n = sys.index_count
    d = assemble_hodge_dirac(gs, check_adjoint=False).block_matrix
    worst = 0.0
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            p = _pi(gs, e.ravel())
            excess = op_norm(d @ p - p @ d) - np.sqrt(sys.symbol[i, j])
            worst = max(worst, excess / max(1.0, np.sqrt(sys.symbol[i, j])))
    return check("unit_commutator_bound", max(worst, 0.0), tol, **gs.params)


# -- type II ---------------------------------------------------------------


def build_dirac2_schur(sys: SchurSystem, fock: QFockSpace) -> DiracII:
    """``x (x) e_ij -> s_q(alpha_i - alpha_j) x (x) e_ij`` on GNS vectors ``(F n) x n`` flattened."""
    if fock.h_dim != sys.h_dim:
        raise ValueError(f"Fock space is over dim {fock.h_dim}, system needs {sys.h_dim}")
    n = sys.index_count
    F = fock.total_dim
    out = np.zeros((F * n * n, F * n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if sys.symbol[i, j] == 0:
                continue
            eii = np.zeros((n, n))
            eii[i, i] = 1.0
            ejj = np.zeros((n, n))
            ejj[j, j] = 1.0
            out += np.kron(np.kron(s_q(fock, sys.difference(i, j)), eii), ejj)
    exact = fock.q == -1 and fock.level_cap >= fock.h_dim
    return DiracII(out, f"dirac2:{sys.name}", exact)


def build_dirac2_fourier(sys: GroupCocycleSystem, fock: QFockSpace, cp: CrossedProduct | None = None) -> DiracII:
    """``x x| lambda_s -> s_q(b(s)) x x| lambda_s`` on GNS vectors in ``l^2(G) (x) Fock``.

    On the ``delta_s`` block this is ``s_q(pi_{s^{-1}} b(s))``.
    """
    if fock.h_dim != sys.h_dim:
        raise ValueError(f"Fock space is over dim {fock.h_dim}, cocycle needs {sys.h_dim}")
    g = sys.group
    F = fock.total_dim
    out = np.zeros((g.order * F, g.order * F), dtype=complex)
    for s in range(g.order):
        sl = slice(s * F, (s + 1) * F)
        out[sl, sl] = s_q(fock, sys.pi[g.inverse[s]] @ sys.b[s])
    exact = fock.q == -1 and fock.level_cap >= fock.h_dim
    return DiracII(out, f"dirac2:{sys.name}", exact)


def dirac2_check(dd: DiracII, gs: GradientSystem, samples: int = 3, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Hermitian, ``[D, 1 (x) a] = L_{grad a}``, kills ``J`` of the diagonal, and squares to ``Id (x) A`` when exact."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        a = gs.random_source(rng)
        p = gs.left_target(a)
        l_da = gs.carrier_left(gs.grad_operator(a))
        worst = max(worst, rel_residual(dd.carrier @ p - p @ dd.carrier, l_da, max(1.0, op_norm(l_da))))
    ker_a = gs.embed[:, gs.generator == 0]
    parts = [
        check("dirac2_hermitian", rel_residual(dd.carrier, adjoint(dd.carrier)), tol),
        check("dirac2_commutator", worst, tol),
        check("dirac2_kills_kernel", float(np.linalg.norm(dd.carrier @ ker_a)), tol),
    ]
    if dd.exact_square:
        parts.append(check("dirac2_square", rel_residual(dd.carrier @ dd.carrier, np.diag(gs.target_generator)), tol))
    out = merge("dirac2", parts, exact_square=dd.exact_square, **gs.params)
    out.seed = seed
    return out


# -- Kato / Khintchine reports ---------------------------------------------


def kato_ratio_report(gs: GradientSystem, p_list=(2.0, 4.0), samples: int = 20, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Ratios ``||grad x||_p / ||A^{1/2} x||_p`` and ``||grad x||_p / ||x||_Gamma,p``.

    Only finiteness and the exact value ``1`` at ``p = 2`` are asserted.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    table: dict[str, dict] = {}
    worst_p2 = 0.0
    finite = True
    for p in p_list:
        kato, khin, exact_all = [], [], True
        for _ in range(samples):
            x = gs.random_source(rng)
            den = gs.source_lp_norm(gs.apply_sqrtA(x), p)
            if den < 1e-14:
                continue
            num, exact = gs.carrier_lp_norm(gs.grad_operator(x), p)
            exact_all &= exact
            kato.append(num / den)
            if p >= 2:
                g = gs.gamma_norm(x, p)
                if g > 1e-14:
                    khin.append(num / g)
        ratios = np.array(kato + khin)
        finite &= bool(np.all(np.isfinite(ratios)))
        if p == 2:
            worst_p2 = max([worst_p2] + [abs(r - 1) for r in kato])
        table[str(p)] = {
            "kato_min": min(kato, default=None),
            "kato_max": max(kato, default=None),
            "khintchine_min": min(khin, default=None),
            "khintchine_max": max(khin, default=None),
            "truncation_exact": exact_all,
        }
    parts = [check("ratios_finite", 0.0 if finite else np.inf, tol)]
    if any(p == 2 for p in p_list):
        parts.append(check("kato_equality_p2", worst_p2, tol))
    out = merge("kato_ratios", parts, samples=samples, **gs.params)
    out.seed = seed
    out.value = table
    return out
