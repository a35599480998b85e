"""
Compressions of the left and right σ-regular representations to ℓ²(B).

All matrices are scipy CSR matrices indexed by the ball's canonical order.
"""
from typing import Callable, Iterator, List, Tuple

import numpy as np
from scipy import sparse

from group_geometry.balls import Ball
from group_geometry.base import GroupElement
from twisted_algebra.cocycles import Cocycle
from twisted_algebra.elements import AlgebraElement


def _csr(rows: List[int], cols: List[int], values: List[complex], size: int) -> sparse.csr_matrix:
    return sparse.coo_matrix(
        (np.asarray(values, dtype=complex), (np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))),
        shape=(size, size),
    ).tocsr()


def translation_entries(f: AlgebraElement, B: Ball, cocycle: Cocycle) -> Iterator[Tuple[int, int, GroupElement, GroupElement, complex]]:
    """
    Nonzero entries of P_B λ(f) P_B as (row, col, g, h, f(g)σ(g,h)),
    where the column is δ_h and the row δ_{gh}.
    """
    B.group.check_same_family(*f.support)
    for g, value in f:
        for col, h in enumerate(B.elements):
            row = B.index(g * h)
            if row is not None:
                yield row, col, g, h, value * cocycle(g, h)


def lambda_matrix(g: GroupElement, B: Ball, cocycle: Cocycle) -> sparse.csr_matrix:
    """P_B λ(g) P_B with λ(g)δ_k = σ(g,k)δ_{gk}"""
    return lambda_of(AlgebraElement.delta(g), B, cocycle)


def lambda_of(f: AlgebraElement, B: Ball, cocycle: Cocycle) -> sparse.csr_matrix:
    """P_B λ(f) P_B = Σ f(g) P_B λ(g) P_B"""
    rows, cols, values = [], [], []
    for row, col, _, _, value in translation_entries(f, B, cocycle):
        rows.append(row)
        cols.append(col)
        values.append(value)
    return _csr(rows, cols, values, len(B))


def rho_matrix(k: GroupElement, B: Ball, cocycle: Cocycle) -> sparse.csr_matrix:
    """P_B ρ(k) P_B with ρ(k)δ_j = σ(j,k⁻¹)δ_{jk⁻¹}"""
    B.group.check_same_family(k)
    k_inverse = k.inverse()
    rows, cols, values = [], [], []
    for col, j in enumerate(B.elements):
        row = B.index(j * k_inverse)
        if row is not None:
            rows.append(row)
            cols.append(col)
            values.append(cocycle(j, k_inverse))
    return _csr(rows, cols, values, len(B))


def equivalence_unitary(f: Callable[[GroupElement], complex], B: Ball) -> sparse.csr_matrix:
    """
    Diagonal unitary W = M_{conj f} on ℓ²(B); for σ′ = σ twisted by f,
    λ_{σ′}(g) = f(g)·W λ_σ(g) W*.
    """
    return sparse.diags(np.array([np.conj(f(h)) for h in B.elements], dtype=complex)).tocsr()
