"""
Lipschitz seminorms from commutators: certified brackets, multiplier
commutators, the Connes diagnostic, coset blocks and the Leibniz and
dynamics checks.
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from group_geometry.balls import Ball, enumerate_ball
from group_geometry.base import GroupElement
from group_geometry.lengths import LengthFunction
from helpers.constants import LEIBNIZ_OMEGA, LEIBNIZ_OMEGA_PRIME
from helpers.exceptions import TruncationError
from helpers.logger import LoggerHelper
from spectral_triple.operators import op_norm, op_norm_estimate
from spectral_triple.triple import TruncatedTriple, commutator, dn_norm, unitary_dynamics
from twisted_algebra.cocycles import Cocycle
from twisted_algebra.elements import AlgebraElement, twisted_convolution
from twisted_algebra.representations import lambda_of, translation_entries

logger = LoggerHelper.get_logger(__name__, prefix='seminorms')


@dataclass
class SeminormBracket:
    """lower = truncated commutator norm, upper = Σ|f(g)|(𝕃_H(g)+𝔽(g))"""

    lower: float
    upper: float
    sharp_upper: float
    radius: float
    size: int
    method: str = "dense-svd"

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def generator_norm(t: TruncatedTriple, g: GroupElement) -> float:
    """‖[D, λ(g)]‖ on the full space: √(𝕃_H(g)² + 𝔽(g)²)"""
    return float(np.hypot(t.h_length(g), t.f_length(g)))


def seminorm_bracket(t: TruncatedTriple, f: AlgebraElement, symmetrize: bool = True,
                     tol: Optional[float] = None) -> SeminormBracket:
    """Certified bracket for L(f) at the truncation radius of t"""
    if symmetrize:
        f = f.symmetrized(t.cocycle)
    estimate = op_norm_estimate(commutator(t, f), tol)
    upper = sum(abs(c) * (t.h_length(g) + t.f_length(g)) for g, c in f)
    sharp = sum(abs(c) * generator_norm(t, g) for g, c in f)
    return SeminormBracket(estimate.lower, float(upper), float(sharp), t.ball.radius, t.size, estimate.method)


def multiplier_commutator(B: Ball, weights: np.ndarray, f: AlgebraElement, cocycle: Cocycle) -> sparse.csr_matrix:
    """[M_w, λ(f)] on ℓ²(B): entries f(g)σ(g,h)(w(gh) − w(h))"""
    rows, cols, values = [], [], []
    for row, col, _, _, coefficient in translation_entries(f, B, cocycle):
        difference = weights[row] - weights[col]
        if difference != 0:
            rows.append(row)
            cols.append(col)
            values.append(coefficient * difference)
    size = len(B)
    return sparse.coo_matrix(
        (np.asarray(values, dtype=complex), (np.asarray(rows, dtype=int), np.asarray(cols, dtype=int))),
        shape=(size, size),
    ).tocsr()


def comparison_norms(t: TruncatedTriple, f: AlgebraElement, tol: Optional[float] = None) -> dict:
    """
    ‖[M_{𝕃_H}, λ(f)]‖, ‖[M_𝔽, λ(f)]‖, ‖[M_{𝕃_H+𝔽}, λ(f)]‖ and ‖[D, λ(f)°]‖
    at the same truncation.
    """
    return {
        "h": op_norm(multiplier_commutator(t.ball, t.h_values, f, t.cocycle), tol),
        "f": op_norm(multiplier_commutator(t.ball, t.f_values, f, t.cocycle), tol),
        "sum": op_norm(multiplier_commutator(t.ball, t.h_values + t.f_values, f, t.cocycle), tol),
        "dirac": op_norm(commutator(t, f), tol),
    }


def connes_commutator_norm(f: AlgebraElement, length: LengthFunction, R: float, cocycle: Optional[Cocycle] = None,
                           budget: Optional[int] = None, tol: Optional[float] = None) -> float:
    """‖[M_𝕃, λ(f)]‖ compressed to the 𝕃-ball of radius R"""
    B = enumerate_ball(length, R, budget)
    cocycle = cocycle or Cocycle.trivial(B.group)
    weights = np.array([length(g) for g in B.elements], dtype=float)
    return op_norm(multiplier_commutator(B, weights, f, cocycle), tol)


@dataclass
class CosetBlock:
    """Norm of the [D_∞, b] block on ℓ²(G_n k), with the triangle bound"""

    value: float
    bound: float
    coset_length: float
    in_subgroup: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def coset_block_seminorm(t_n: TruncatedTriple, f: AlgebraElement, k: GroupElement,
                         tol: Optional[float] = None) -> CosetBlock:
    """
    ‖[D_∞, λ(f)]‖ on the coset window B_n·k, transported to ℓ²(B_n) by the
    right translation ρ(k). On the coset 𝔽 is constant, so only the
    𝕃_H(·k) multiplier survives. Bound: L_n(f) + 2𝕃_H(k)‖P λ(f) P‖.
    """
    B_n = t_n.ball
    n = t_n.level if t_n.level is not None else max((g.level for g in B_n.elements), default=0)
    lower_n = op_norm(commutator(t_n, f), tol)
    b_norm = op_norm(lambda_of(f, B_n, t_n.cocycle), tol)
    h_k = t_n.h_length(k)
    if k.level <= n:
        return CosetBlock(lower_n, lower_n + 2 * h_k * b_norm, h_k, True)

    shifted = [h * k for h in B_n.elements]
    f_on_coset = {t_n.f_length(x) for x in shifted}
    if len(f_on_coset) != 1:
        raise TruncationError(f"𝔽 is not constant on the coset window of {k}")
    weights = np.array([t_n.h_length(x) for x in shifted], dtype=float)
    value = op_norm(multiplier_commutator(B_n, weights, f, t_n.cocycle), tol)
    return CosetBlock(value, lower_n + 2 * h_k * b_norm, h_k, False)


@dataclass
class CheckReport:
    samples: int
    violations: int
    max_excess: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {**self.__dict__, "passed": self.passed}


def leibniz_check(t: TruncatedTriple, t_pad: TruncatedTriple, pairs: Iterable[Tuple[AlgebraElement, AlgebraElement]],
                  slack: float = 1e-10, tol: Optional[float] = None) -> CheckReport:
    """
    L_B(f∘g) ≤ Ω(‖f‖L(g) + L(f)‖g‖) + Ω′L(f)L(g) for the Jordan product,
    with L(f), L(g) taken on the padded ball and ‖·‖ bounded by ℓ¹ norms.
    The padded ball must contain supp(f)·B and supp(g)·B.
    """
    if any(h not in t_pad.ball for h in t.ball.elements):
        raise TruncationError("padded ball does not contain the inner ball")
    samples, violations, worst = 0, 0, 0.0
    for f, g in pairs:
        f, g = f.symmetrized(t.cocycle), g.symmetrized(t.cocycle)
        for element in f.support + g.support:
            if any((element * h) not in t_pad.ball for h in t.ball.elements):
                raise TruncationError("padded ball does not contain the translates of the inner ball")
        jordan = 0.5 * (twisted_convolution(f, g, t.cocycle) + twisted_convolution(g, f, t.cocycle))
        lhs = op_norm(commutator(t, jordan), tol)
        lf, lg = op_norm(commutator(t_pad, f), tol), op_norm(commutator(t_pad, g), tol)
        rhs = LEIBNIZ_OMEGA * (f.l1_norm() * lg + lf * g.l1_norm()) + LEIBNIZ_OMEGA_PRIME * lf * lg
        excess = lhs - rhs
        worst = max(worst, excess)
        samples += 1
        if excess > slack * max(1.0, rhs):
            violations += 1
    return CheckReport(samples, violations, worst)


def dynamics_lipschitz_check(t: TruncatedTriple, rng: np.random.Generator, samples: int,
                             horizon: float = 1.0, slack: float = 1e-10) -> CheckReport:
    """‖exp(itD)ξ − exp(isD)ξ‖ ≤ |t − s| for random ξ with ‖ξ‖ + ‖Dξ‖ = 1"""
    violations, worst = 0, 0.0
    for _ in range(samples):
        xi = t.random_vector(rng)
        xi /= dn_norm(t, xi)
        s, u = rng.uniform(0, horizon, size=2)
        gap = np.linalg.norm(unitary_dynamics(t, s).apply(xi) - unitary_dynamics(t, u).apply(xi))
        excess = float(gap - abs(s - u))
        worst = max(worst, excess)
        if excess > slack:
            violations += 1
    return CheckReport(samples, violations, worst)


def symmetric_generator(g: GroupElement, cocycle: Cocycle) -> AlgebraElement:
    """δ_g + δ_g* as a self-adjoint element"""
    delta = AlgebraElement.delta(g)
    return delta + delta.involution(cocycle)


def bracket_sweep(triples: Sequence[TruncatedTriple], f: AlgebraElement) -> list:
    """Seminorm brackets of one element over increasing truncations"""
    return [seminorm_bracket(t, f) for t in triples]
