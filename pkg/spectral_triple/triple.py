"""
The truncated even spectral triple (λ(C_c(G,σ)), ℓ²(B)⊗E, D) with
D = M_{𝕃_H}⊗γ₁ + M_𝔽⊗γ₂ stored blockwise.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy import sparse

from group_geometry.balls import Ball
from group_geometry.lengths import LengthFunction
from spectral_triple.clifford import CliffordPair
from spectral_triple.operators import BlockOperator
from twisted_algebra.cocycles import Cocycle
from twisted_algebra.elements import AlgebraElement
from twisted_algebra.representations import lambda_of, translation_entries

ScalarFunction = Callable[[np.ndarray], np.ndarray]


@dataclass
class TruncatedTriple:
    """
    Dirac blocks 𝕃_H(g)γ₁ + 𝔽(g)γ₂ over a ball B.

    `level` is the finite n of a G_n truncation, or None for a window of
    the limit triple.
    """

    ball: Ball
    h_length: LengthFunction
    f_length: LengthFunction
    cocycle: Cocycle
    clifford: CliffordPair = field(default_factory=CliffordPair)
    level: Optional[int] = None
    h_values: np.ndarray = field(init=False, repr=False)
    f_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.h_values = np.array([self.h_length(g) for g in self.ball.elements], dtype=float)
        self.f_values = np.array([self.f_length(g) for g in self.ball.elements], dtype=float)

    @property
    def size(self) -> int:
        return len(self.ball)

    @property
    def fibre(self) -> int:
        return self.clifford.dim

    @property
    def block_norms(self) -> np.ndarray:
        """m_g = √(𝕃_H(g)² + 𝔽(g)²)"""
        return np.hypot(self.h_values, self.f_values)

    def _kernel(self, i: int) -> np.ndarray:
        return self.clifford.combination(self.h_values[i], self.f_values[i])

    def dirac_operator(self) -> BlockOperator:
        return BlockOperator.from_function(self.size, self._kernel, self.fibre)

    def grading(self) -> BlockOperator:
        return BlockOperator.constant(self.clifford.grading, self.size)

    def lambda_E(self, f: AlgebraElement) -> sparse.csr_matrix:
        """λ(f)⊗1_E on the truncation"""
        return sparse.kron(lambda_of(f, self.ball, self.cocycle), sparse.identity(self.fibre), format="csr")

    def random_vector(self, rng: np.random.Generator) -> np.ndarray:
        size = self.size * self.fibre
        return rng.normal(size=size) + 1j * rng.normal(size=size)


def dirac(B: Ball, h_length: LengthFunction, f_length: LengthFunction, cocycle: Optional[Cocycle] = None,
          dim_e: int = 2, level: Optional[int] = None) -> TruncatedTriple:
    """Build the truncated triple over B"""
    cocycle = cocycle or Cocycle.trivial(B.group)
    return TruncatedTriple(B, h_length, f_length, cocycle, CliffordPair(dim_e), level)


def spectrum(t: TruncatedTriple) -> np.ndarray:
    """Sorted eigenvalues ±m_g, each with multiplicity dim(E)/2"""
    half = t.fibre // 2
    norms = t.block_norms
    return np.sort(np.concatenate([np.repeat(norms, half), np.repeat(-norms, half)]))


def spectrum_rows(t: TruncatedTriple) -> List[dict]:
    """(eigenvalue, multiplicity, generating element) rows, ascending"""
    half = t.fibre // 2
    rows = []
    for g, m in zip(t.ball.elements, t.block_norms):
        if m == 0:
            rows.append({"eigenvalue": 0.0, "multiplicity": t.fibre, "element": g.to_list()})
        else:
            rows.append({"eigenvalue": -float(m), "multiplicity": half, "element": g.to_list()})
            rows.append({"eigenvalue": float(m), "multiplicity": half, "element": g.to_list()})
    rows.sort(key=lambda row: row["eigenvalue"])
    return rows


def eigenvalue_counting(t: TruncatedTriple, r: float) -> int:
    """#{eigenvalues of |D| ≤ r}, counted with multiplicity"""
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    return int(t.fibre * np.count_nonzero(t.block_norms <= r * (1 + 1e-12)))


def commutator(t: TruncatedTriple, f: AlgebraElement) -> sparse.csr_matrix:
    """
    [D, λ(f)⊗1_E] on the truncation: the block from δ_h to δ_{gh} is
    f(g)σ(g,h)·((𝕃_H(gh)−𝕃_H(h))γ₁ + (𝔽(gh)−𝔽(h))γ₂).
    """
    e = t.fibre
    rows, cols, values = [], [], []
    local_rows, local_cols = np.nonzero(np.ones((e, e)))
    for row, col, _, _, coefficient in translation_entries(f, t.ball, t.cocycle):
        block = coefficient * t.clifford.combination(
            t.h_values[row] - t.h_values[col], t.f_values[row] - t.f_values[col])
        rows.extend(row * e + local_rows)
        cols.extend(col * e + local_cols)
        values.extend(block[local_rows, local_cols])
    size = t.size * e
    return sparse.coo_matrix(
        (np.asarray(values, dtype=complex), (np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))),
        shape=(size, size),
    ).tocsr()


def dn_norm(t: TruncatedTriple, xi: np.ndarray) -> float:
    """‖ξ‖ + ‖Dξ‖"""
    xi = np.asarray(xi, dtype=complex)
    return float(np.linalg.norm(xi) + np.linalg.norm(t.dirac_operator().apply(xi)))


def unitary_dynamics(t: TruncatedTriple, s: float) -> BlockOperator:
    """exp(isD) = cos(sm)·1 + i·sin(sm)/m·(aγ₁ + bγ₂) blockwise, 1 on blocks with m = 0"""
    identity = t.clifford.identity
    norms = t.block_norms

    def block(i: int) -> np.ndarray:
        m = norms[i]
        if m == 0:
            return identity.copy()
        return np.cos(s * m) * identity + 1j * np.sin(s * m) / m * t._kernel(i)

    return BlockOperator.from_function(t.size, block, t.fibre)


def functional_calculus(t: TruncatedTriple, fn: ScalarFunction) -> BlockOperator:
    """f(D) = f(m)P₊ + f(−m)P₋ on each block, with P± = (1 ± K/m)/2"""
    identity = t.clifford.identity
    norms = t.block_norms

    def block(i: int) -> np.ndarray:
        m = norms[i]
        if m == 0:
            return complex(np.asarray(fn(np.array([0.0])))[0]) * identity
        plus, minus = np.asarray(fn(np.array([m, -m])), dtype=complex)
        projection = t._kernel(i) / m
        return plus * (identity + projection) / 2 + minus * (identity - projection) / 2

    return BlockOperator.from_function(t.size, block, t.fibre)


def function_preset(name: str) -> ScalarFunction:
    """Scalar functions vanishing at infinity used by convergence experiments"""
    if name == "resolvent":
        return lambda x: 1.0 / (1.0 + np.asarray(x, dtype=float) ** 2)
    if name == "gaussian":
        return lambda x: np.exp(-np.asarray(x, dtype=float) ** 2)
    if name == "zero":
        return lambda x: np.zeros_like(np.asarray(x, dtype=float))
    raise ValueError(f"unknown function preset {name!r}")
