"""
Block-diagonal operators on ℓ²(B)⊗E and certified operator-norm estimation.
"""
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, svds

from helpers.config import ConfigHelper
from helpers.exceptions import OperatorNormError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='operators')

Matrix = Union[np.ndarray, sparse.spmatrix]


class BlockOperator:
    """
    Operator stored as one dim(E)×dim(E) block per ball element.

    Vectors are indexed ball-major: position i·dim(E) + c holds component c
    of the fibre over the i-th element.
    """

    def __init__(self, blocks: np.ndarray):
        blocks = np.asarray(blocks, dtype=complex)
        if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
            raise ValueError(f"blocks must have shape (n, e, e), got {blocks.shape}")
        self.blocks = blocks

    @property
    def count(self) -> int:
        return self.blocks.shape[0]

    @property
    def fibre(self) -> int:
        return self.blocks.shape[1]

    @property
    def shape(self):
        size = self.count * self.fibre
        return size, size

    def apply(self, xi: np.ndarray) -> np.ndarray:
        fibres = np.asarray(xi, dtype=complex).reshape(self.count, self.fibre)
        return np.einsum("nij,nj->ni", self.blocks, fibres).reshape(-1)

    def compose(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(np.einsum("nij,njk->nik", self.blocks, other.blocks))

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(np.conj(np.transpose(self.blocks, (0, 2, 1))))

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(self.blocks + other.blocks)

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(self.blocks - other.blocks)

    def norm(self) -> float:
        """Exact norm: the largest block norm"""
        if self.count == 0:
            return 0.0
        return float(max(np.linalg.norm(block, 2) for block in self.blocks))

    def to_sparse(self) -> sparse.csr_matrix:
        if self.count == 0:
            return sparse.csr_matrix((0, 0), dtype=complex)
        return sparse.block_diag(list(self.blocks), format="csr")

    def coo_rows(self) -> List[tuple]:
        """(row, col, re, im) for every nonzero entry"""
        coo = self.to_sparse().tocoo()
        return [(int(r), int(c), float(v.real), float(v.imag)) for r, c, v in zip(coo.row, coo.col, coo.data) if v != 0]

    @classmethod
    def constant(cls, block: np.ndarray, count: int) -> "BlockOperator":
        return cls(np.repeat(np.asarray(block, dtype=complex)[None, :, :], count, axis=0))

    @classmethod
    def from_function(cls, count: int, builder: Callable[[int], np.ndarray], fibre: int) -> "BlockOperator":
        """Blocks builder(0), ..., builder(count − 1), each fibre×fibre"""
        if count == 0:
            return cls(np.zeros((0, fibre, fibre), dtype=complex))
        op = cls(np.stack([builder(i) for i in range(count)]))
        if op.fibre != fibre:
            raise ValueError(f"builder returned {op.fibre}×{op.fibre} blocks, expected {fibre}×{fibre}")
        return op


@dataclass
class NormEstimate:
    """Largest singular value with a certified bracket lower ≤ ‖M‖ ≤ upper"""

    value: float
    lower: float
    upper: float
    converged: bool
    method: str
    iterations: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _upper_certificate(m: sparse.spmatrix) -> float:
    """min(Frobenius, √(‖M‖₁‖M‖∞))"""
    absolute = abs(m)
    frobenius = float(np.sqrt(absolute.power(2).sum()))
    one = float(absolute.sum(axis=0).max())
    infinity = float(absolute.sum(axis=1).max())
    return min(frobenius, float(np.sqrt(one * infinity)))


def _power_iteration(m: sparse.spmatrix, tol: float, max_iterations: int, seed: int) -> NormEstimate:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=m.shape[1]) + 1j * rng.normal(size=m.shape[1])
    v /= np.linalg.norm(v)
    adjoint = m.conj().T.tocsr()
    previous, lower = 0.0, 0.0
    for iteration in range(1, max_iterations + 1):
        u = m @ v
        lower = float(np.linalg.norm(u))
        if lower == 0.0:
            break
        w = adjoint @ u
        v = w / np.linalg.norm(w)
        if abs(lower - previous) <= tol * lower:
            return NormEstimate(lower, lower, _upper_certificate(m), True, "power", iteration)
        previous = lower
    return NormEstimate(lower, lower, _upper_certificate(m), lower == 0.0, "power", max_iterations)


def op_norm_estimate(m: Matrix, tol: Optional[float] = None, max_iterations: Optional[int] = None,
                     dense_cutoff: Optional[int] = None, seed: int = 0) -> NormEstimate:
    """
    Largest singular value of m.

    Small matrices use a dense SVD. Larger ones use ARPACK with a fixed start
    vector, certified from below by ‖Mv‖ for the returned unit vector v, and
    fall back to fixed-seed power iteration when ARPACK does not converge.
    """
    config = ConfigHelper()
    tol = tol if tol is not None else config.get_tolerance()
    max_iterations = max_iterations or config.get_max_iterations()
    dense_cutoff = dense_cutoff if dense_cutoff is not None else config.get_dense_cutoff()

    m = sparse.csr_matrix(m, dtype=complex)
    if m.shape[0] == 0 or m.shape[1] == 0 or m.count_nonzero() == 0:
        return NormEstimate(0.0, 0.0, 0.0, True, "zero")

    if max(m.shape) <= dense_cutoff or min(m.shape) < 3:
        value = float(np.linalg.norm(m.toarray(), 2))
        return NormEstimate(value, value, value, True, "dense-svd")

    started = time.perf_counter()
    v0 = np.random.default_rng(seed).normal(size=min(m.shape)).astype(m.dtype)
    try:
        _, singular, vt = svds(m, k=1, tol=tol, maxiter=max_iterations, v0=v0)
        v = np.conj(vt[0])
        lower = float(np.linalg.norm(m @ v) / np.linalg.norm(v))
        value = float(singular[0])
        estimate = NormEstimate(value, min(lower, value), _upper_certificate(m), True, "arpack")
    except ArpackNoConvergence:
        logger.warning(f"ARPACK did not converge on a {m.shape} matrix; falling back to power iteration")
        estimate = _power_iteration(m, tol, max_iterations, seed)
    logger.debug(
        f"Operator norm {estimate.value:.12g} via {estimate.method}",
        extra={"shape": m.shape, "elapsed_ms": round(1000 * (time.perf_counter() - started), 3)},
    )
    return estimate


def op_norm(m: Matrix, tol: Optional[float] = None, **kwargs) -> float:
    """Largest singular value; raises OperatorNormError carrying the bracket when the cap is hit"""
    estimate = op_norm_estimate(m, tol, **kwargs)
    if not estimate.converged:
        raise OperatorNormError(
            f"norm iteration stopped at {estimate.iterations} steps in [{estimate.lower}, {estimate.upper}]",
            estimate=estimate,
        )
    return estimate.value
