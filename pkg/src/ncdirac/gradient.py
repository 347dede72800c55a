"""The (A, grad, grad^*) triple shared by the Schur and Fourier flavours.

Both flavours are flattened to the same finite-dimensional L^2 picture:

* the *source* is the algebra (matrices on l^2_I, or coefficient vectors on G)
  with its trace inner product, as a plain coordinate vector;
* the *target* is the GNS space of the larger algebra (q-Gaussians tensor
  matrices, or the crossed product), i.e. every operator ``z`` is stored as
  the vector ``z . Omega``-ish image described by the flavour.

Adjoints are then ordinary conjugate transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .linalg import adjoint


@dataclass(frozen=True)
class GradientSystem:
    name: str
    grad: np.ndarray
    generator: np.ndarray
    target_generator: np.ndarray
    embed: np.ndarray
    left_source: Callable[[np.ndarray], np.ndarray]
    left_target: Callable[[np.ndarray], np.ndarray]
    grad_operator: Callable[[np.ndarray], np.ndarray]
    carrier_left: Callable[[np.ndarray], np.ndarray]
    gns: Callable[[np.ndarray], np.ndarray]
    carrier_trace: Callable[[np.ndarray], complex]
    carrier_dim: int
    random_carrier: Callable[[np.random.Generator], np.ndarray]
    source_adjoint: Callable[[np.ndarray], np.ndarray]
    source_product: Callable[[np.ndarray, np.ndarray], np.ndarray]
    source_lp_norm: Callable[[np.ndarray, float], float]
    carrier_lp_norm: Callable[[np.ndarray, float], tuple[float, bool]]
    source_op_norm: Callable[[np.ndarray], float]
    gamma_norm: Callable[[np.ndarray, float], float]
    random_source: Callable[[np.random.Generator], np.ndarray]
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def source_dim(self) -> int:
        return self.grad.shape[1]

    @property
    def target_dim(self) -> int:
        return self.grad.shape[0]

    @property
    def grad_adjoint(self) -> np.ndarray:
        return adjoint(self.grad)

    def apply_grad(self, x: np.ndarray) -> np.ndarray:
        return self.grad @ x

    def apply_grad_adjoint(self, y: np.ndarray) -> np.ndarray:
        return self.grad_adjoint @ y

    def apply_A(self, x: np.ndarray) -> np.ndarray:
        return self.generator * x

    def apply_sqrtA(self, x: np.ndarray) -> np.ndarray:
        return np.sqrt(self.generator) * x

    def adjointness_residual(self, samples: int = 3, seed: int = 0) -> float:
        """Largest ``|trace((grad e_a)^* z) - <e_a, grad^* gns(z)>|``.

        The left side is evaluated with carrier operators and the trace, the
        right side with the flattened matrices, over source basis vectors and
        random elements ``z`` of the carrier algebra.
        """
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            z = self.random_carrier(rng)
            rhs = self.grad_adjoint @ self.gns(z)
            for a in range(self.source_dim):
                e = np.zeros(self.source_dim, dtype=complex)
                e[a] = 1.0
                op = self.grad_operator(e)
                lhs = self.carrier_trace(adjoint(op) @ z)
                worst = max(worst, abs(lhs - rhs[a]) / max(1.0, np.linalg.norm(z)))
        return float(worst)
