"""Truncated q-Fock space over a finite-dimensional real Hilbert space.

Level ``k`` is ``H^{(x)k}`` with the q-deformed inner product
``sum_sigma q^{inv(sigma)} P_sigma``, orthonormalised after removing null
directions (these only exist for ``q = +-1``). Levels above ``level_cap`` are
dropped, so creation operators send the top level to zero. A word of ``2k``
q-Gaussians started at the vacuum never climbs above level ``k``; vacuum
traces of words of length ``<= 2 * level_cap`` are therefore exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations

import numpy as np

from .linalg import EIG_CUTOFF, WeightedSpace, adjoint, orthonormalize
from .wick import inversions

MAX_TOTAL_DIM = 4096


class FockBudgetError(RuntimeError):
    """Raised when the truncated Fock space would exceed the dimension budget."""


def _check_q(q: float) -> None:
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")


def q_gram(q: float, n: int, k: int) -> np.ndarray:
    """Gram matrix of the q-inner product on raw coordinates of ``H^{(x)k}``."""
    size = n**k
    if k == 0:
        return np.ones((1, 1))
    idx = np.arange(size).reshape((n,) * k)
    gram = np.zeros((size, size))
    eye = np.eye(size)
    for sigma in permutations(range(k)):
        w = 1.0 if q == 0 and inversions(sigma) == 0 else float(q) ** inversions(sigma)
        if w == 0.0:
            continue
        perm = np.transpose(idx, sigma).ravel()
        gram += w * eye[:, perm]
    return gram


def default_level_cap(h_dim: int) -> int:
    return max(h_dim, 4)


@dataclass(frozen=True)
class QFockSpace:
    q: float
    h_dim: int
    level_cap: int
    bases: tuple[np.ndarray, ...] = field(repr=False)
    readouts: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def level_dims(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    @property
    def total_dim(self) -> int:
        return sum(self.level_dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.level_dims:
            out.append(acc)
            acc += d
        return tuple(out)

    @property
    def exact_word_length(self) -> int:
        """Longest q-Gaussian word whose vacuum trace the truncation reproduces exactly."""
        return 2 * self.level_cap

    def level_slice(self, k: int) -> slice:
        off = self.offsets[k]
        return slice(off, off + self.level_dims[k])

    def lower_levels_mask(self) -> np.ndarray:
        """Boolean mask of basis vectors in levels ``0 .. level_cap - 1``."""
        mask = np.ones(self.total_dim, dtype=bool)
        mask[self.level_slice(self.level_cap)] = False
        return mask

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.total_dim, dtype=complex)
        v[0] = 1.0
        return v

    def identity(self) -> np.ndarray:
        return np.eye(self.total_dim, dtype=complex)

    def level_vector(self, k: int, raw: np.ndarray) -> np.ndarray:
        """Embed a raw tensor of ``H^{(x)k}`` as a vector in orthonormal coordinates."""
        out = np.zeros(self.total_dim, dtype=complex)
        out[self.level_slice(k)] = self.readouts[k] @ np.asarray(raw, dtype=complex).ravel()
        return out

    @cached_property
    def _basis_creations(self) -> tuple[np.ndarray, ...]:
        return tuple(self._creation_matrix(np.eye(self.h_dim)[i]) for i in range(self.h_dim))

    def _creation_matrix(self, e: np.ndarray) -> np.ndarray:
        out = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        n = self.h_dim
        for k in range(self.level_cap):
            if self.level_dims[k] == 0 or self.level_dims[k + 1] == 0:
                continue
            left = np.kron(e.reshape(n, 1), np.eye(n**k))
            block = self.readouts[k + 1] @ left @ self.bases[k]
            out[self.level_slice(k + 1), self.level_slice(k)] = block
        return out


def build_fock(q: float, h_dim: int, level_cap: int | None = None, tol: float = EIG_CUTOFF) -> QFockSpace:
    _check_q(q)
    if h_dim < 1:
        raise ValueError("h_dim must be at least 1")
    cap = default_level_cap(h_dim) if level_cap is None else int(level_cap)
    if cap < 1:
        raise ValueError("level_cap must be at least 1")
    # raw level sizes bound the orthonormalised ones; refuse before building big Grams
    if q == -1:
        from math import comb

        bound = sum(comb(h_dim, k) for k in range(cap + 1))
    elif q == 1:
        from math import comb

        bound = sum(comb(h_dim + k - 1, k) for k in range(cap + 1))
    else:
        bound = sum(h_dim**k for k in range(cap + 1))
    if bound > MAX_TOTAL_DIM or h_dim**cap > 4 * MAX_TOTAL_DIM:
        raise FockBudgetError(
            f"q-Fock space with h_dim={h_dim}, cap={cap} exceeds the budget {MAX_TOTAL_DIM}"
        )
    bases, readouts = [], []
    for k in range(cap + 1):
        gram = q_gram(q, h_dim, k)
        basis, _ = orthonormalize(WeightedSpace(gram), tol)
        bases.append(basis)
        readouts.append(adjoint(basis) @ gram)
    return QFockSpace(float(q), int(h_dim), cap, tuple(bases), tuple(readouts))


def _as_h_vector(space: QFockSpace, e) -> np.ndarray:
    v = np.asarray(e, dtype=float).ravel()
    if v.size != space.h_dim:
        raise ValueError(f"vector has dimension {v.size}, expected {space.h_dim}")
    return v


def creation(space: QFockSpace, e) -> np.ndarray:
    """Matrix of the creation operator ``l(e)``."""
    v = _as_h_vector(space, e)
    out = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for c, op in zip(v, space._basis_creations):
        if c != 0.0:
            out += c * op
    return out


def annihilation(space: QFockSpace, e) -> np.ndarray:
    return adjoint(creation(space, e))


def s_q(space: QFockSpace, e) -> np.ndarray:
    """The selfadjoint q-Gaussian ``l(e) + l(e)^*``."""
    c = creation(space, e)
    return c + adjoint(c)


def vacuum_trace(x: np.ndarray) -> complex:
    return complex(np.asarray(x)[0, 0])


def word_vacuum_trace(space: QFockSpace, vectors) -> complex:
    """``<Omega, s_q(f_1) ... s_q(f_m) Omega>`` by applying the factors to the vacuum."""
    v = space.vacuum()
    for f in reversed(list(vectors)):
        v = s_q(space, f) @ v
    return complex(v[0])


def second_quantize(space: QFockSpace, u, tol: float = 1e-10) -> np.ndarray:
    """Unitary ``F_q(u)`` acting as ``u^{(x)k}`` on level ``k``."""
    u = np.asarray(u, dtype=float)
    n = space.h_dim
    if u.shape != (n, n):
        raise ValueError(f"u must be {n}x{n}")
    if np.max(np.abs(u.T @ u - np.eye(n))) > tol:
        raise ValueError("u is not orthogonal")
    out = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    power = np.ones((1, 1))
    for k in range(space.level_cap + 1):
        if k > 0:
            power = np.kron(u, power)
        if space.level_dims[k]:
            sl = space.level_slice(k)
            out[sl, sl] = space.readouts[k] @ power @ space.bases[k]
    return out


def automorphism(space: QFockSpace, u, x: np.ndarray) -> np.ndarray:
    """``Gamma_q(u)(x) = F_q(u) x F_q(u)^*``."""
    f = second_quantize(space, u)
    return f @ x @ adjoint(f)


def q_relation_residual(space: QFockSpace, vectors=None) -> float:
    """Largest ``||(l(e)^* l(f) - q l(f) l(e)^* - <e, f>) P||`` below the cap.

    ``P`` projects onto levels ``< level_cap``, where truncation does not
    interfere; ``vectors`` defaults to the standard basis.
    """
    if vectors is None:
        vectors = list(np.eye(space.h_dim))
    mask = space.lower_levels_mask()
    worst = 0.0
    ident = space.identity()
    for e in vectors:
        le = creation(space, e)
        for f in vectors:
            lf = creation(space, f)
            rel = adjoint(le) @ lf - space.q * lf @ adjoint(le) - float(np.dot(e, f)) * ident
            worst = max(worst, float(np.abs(rel[:, mask]).max(initial=0.0)))
    return worst


def fermion_square_residual(space: QFockSpace, e) -> float:
    """``||s_{-1}(e)^2 - ||e||^2 Id||_inf`` on the full exterior algebra."""
    if space.q != -1 or space.level_cap < space.h_dim:
        raise ValueError("needs q = -1 and the full exterior algebra")
    v = _as_h_vector(space, e)
    s = s_q(space, v)
    return float(np.linalg.norm(s @ s - float(v @ v) * space.identity(), 2))
