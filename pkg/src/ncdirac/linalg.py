"""Dense complex matrix kernel.

Everything here works on plain ``numpy`` arrays with a complex dtype. Real
inputs are promoted with zero imaginary part so one code path serves the real
Hilbert space H and the complex matrix algebras built on top of it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
EIG_CUTOFF = 1e-10


def default_tol() -> float:
    """Equality tolerance, overridable with the ``NCDIRAC_TOL`` env var."""
    raw = os.environ.get("NCDIRAC_TOL")
    if raw is None:
        return DEFAULT_TOL
    return float(raw)


def as_matrix(x) -> np.ndarray:
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def adjoint(x: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(x)).T


def singular_values(x) -> np.ndarray:
    a = as_matrix(x)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def schatten_norm(x, p: float = 2.0) -> float:
    """Schatten p-norm ``(sum sigma_k**p)**(1/p)``; ``p=inf`` is the operator norm.

    Values of ``p`` in ``(0, 1)`` give the usual quasi-norm.
    """
    if not (p > 0):
        raise ValueError(f"p must be positive, got {p}")
    s = singular_values(x)
    if s.size == 0:
        return 0.0
    if np.isinf(p):
        return float(s.max())
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    return float(np.sum(s**p) ** (1.0 / p))


def op_norm(x) -> float:
    return schatten_norm(x, np.inf)


def rel_residual(a, b, scale: float | None = None) -> float:
    """Frobenius residual ``||a - b||`` relative to ``max(||a||, ||b||, 1)``.

    The floor at 1 keeps comparisons of matrices that should both vanish from
    dividing by zero; pass ``scale`` to override the normaliser.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    diff = np.linalg.norm(a - b)
    if scale is None:
        scale = max(np.linalg.norm(a), np.linalg.norm(b), 1.0)
    return float(diff / scale)


def is_hermitian(x, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(op_norm(a), 1.0)
    return bool(np.max(np.abs(a - adjoint(a)), initial=0.0) <= tol * scale)


def is_psd(x, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"is_psd needs a square matrix, got {a.shape}")
    if a.size == 0:
        return True
    if not is_hermitian(a, tol):
        return False
    h = 0.5 * (a + adjoint(a))
    w = np.linalg.eigvalsh(h)
    return bool(w.min() >= -tol * max(op_norm(a), 1e-300))


def eigh_hermitian(x) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(x)
    h = 0.5 * (a + adjoint(a))
    return np.linalg.eigh(h)


def psd_power(x, power: float, tol: float = EIG_CUTOFF) -> np.ndarray:
    """``x**power`` for PSD ``x``; eigenvalues below ``tol*||x||`` are treated as 0."""
    w, v = eigh_hermitian(x)
    top = max(float(np.max(np.abs(w), initial=0.0)), 0.0)
    if w.size and w.min() < -max(tol * top, 1e-14):
        raise ValueError(f"matrix is not PSD: min eigenvalue {w.min():.3e}")
    w = np.where(w > tol * top, w, 0.0)
    wp = np.zeros_like(w)
    pos = w > 0
    wp[pos] = w[pos] ** power
    return (v * wp) @ adjoint(v)


def mat_sqrt_psd(x, tol: float = EIG_CUTOFF) -> np.ndarray:
    """Principal square root of a PSD matrix."""
    w, v = eigh_hermitian(x)
    top = float(np.max(np.abs(w), initial=0.0))
    if w.size and w.min() < -max(tol * top, 1e-14):
        raise ValueError(f"matrix is not PSD: min eigenvalue {w.min():.3e}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ adjoint(v)


@dataclass(frozen=True)
class WeightedSpace:
    """Coordinate space carrying the inner product ``<u, v> = u^* gram v``."""

    gram: np.ndarray

    @property
    def dim(self) -> int:
        return self.gram.shape[0]


def orthonormalize(space: WeightedSpace, tol: float = EIG_CUTOFF) -> tuple[np.ndarray, int]:
    """Orthonormal basis of the quotient of ``space`` by its null vectors.

    Returns ``(basis, d)`` where the columns of ``basis`` (shape ``dim x d``)
    are orthonormal for the weighted inner product, i.e.
    ``basis^* gram basis = I_d``. Eigenvalues below ``tol`` times the largest
    one are discarded as null directions.
    """
    g = as_matrix(space.gram)
    if g.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex), 0
    w, v = eigh_hermitian(g)
    top = float(w.max()) if w.size else 0.0
    if top <= 0:
        return np.zeros((g.shape[0], 0), dtype=complex), 0
    keep = w > tol * top
    basis = v[:, keep] / np.sqrt(w[keep])
    return basis, int(keep.sum())


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_matrix(n: int, rng: np.random.Generator, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def range_projector(x, tol: float = EIG_CUTOFF) -> np.ndarray:
    """Orthogonal projector onto the column space of ``x``."""
    q = range_basis(x, tol)
    return q @ adjoint(q)


def range_basis(x, tol: float = EIG_CUTOFF) -> np.ndarray:
    """Orthonormal basis of the column space, singular-value cutoff ``tol*sigma_max``."""
    a = np.asarray(x, dtype=complex)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    return u[:, s > tol * s[0]]


def null_basis(x, tol: float = EIG_CUTOFF, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the kernel of ``x``.

    Singular values below ``tol*scale`` count as zero; ``scale`` defaults to the
    largest singular value (or 1 for the zero matrix).
    """
    a = np.asarray(x, dtype=complex)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if scale is None:
        scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > tol * scale))
    return adjoint(vh[rank:, :])


def matrix_to_json(x) -> dict:
    a = as_matrix(x)
    flat = a.ravel()
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros(rows * cols)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("matrix JSON entry count does not match rows*cols")
    return as_matrix((re + 1j * im).reshape(rows, cols))
