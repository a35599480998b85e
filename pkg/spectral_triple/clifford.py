"""
Weyl matrices γ₁, γ₂ acting on E = ℂ^{2k} and the grading iγ₁γ₂.
"""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CliffordPair:
    """γ₁ = diag(1,−1), γ₂ = antidiag(1,1), repeated blockwise up to dim E"""

    dim: int = 2
    gamma1: np.ndarray = field(init=False, compare=False, repr=False)
    gamma2: np.ndarray = field(init=False, compare=False, repr=False)
    grading: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2:
            raise ValueError(f"dim E must be a positive even number, got {self.dim}")
        repeat = np.eye(self.dim // 2, dtype=complex)
        gamma1 = np.kron(repeat, np.array([[1, 0], [0, -1]], dtype=complex))
        gamma2 = np.kron(repeat, np.array([[0, 1], [1, 0]], dtype=complex))
        object.__setattr__(self, "gamma1", gamma1)
        object.__setattr__(self, "gamma2", gamma2)
        object.__setattr__(self, "grading", 1j * gamma1 @ gamma2)

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def combination(self, a: float, b: float) -> np.ndarray:
        """aγ₁ + bγ₂"""
        return a * self.gamma1 + b * self.gamma2

    def anticommutator_residual(self) -> float:
        """Largest deviation from γ_jγ_k + γ_kγ_j = 2δ_{jk}"""
        pairs = (
            (self.gamma1 @ self.gamma1 + self.gamma1 @ self.gamma1) - 2 * self.identity,
            (self.gamma2 @ self.gamma2 + self.gamma2 @ self.gamma2) - 2 * self.identity,
            self.gamma1 @ self.gamma2 + self.gamma2 @ self.gamma1,
        )
        return float(max(np.abs(p).max() for p in pairs))
