"""
Dense reference implementations used only by the test suites.
"""
import itertools
from fractions import Fraction
from typing import List, Sequence

import numpy as np


def line_w1(positions: Sequence[Fraction], phi: Sequence[Fraction], psi: Sequence[Fraction]) -> Fraction:
    """Wasserstein-1 on the line: ∫|F_φ − F_ψ| between sorted positions"""
    order = sorted(range(len(positions)), key=lambda k: positions[k])
    total, cumulative = Fraction(0), Fraction(0)
    for a, b in zip(order, order[1:]):
        cumulative += Fraction(phi[a]) - Fraction(psi[a])
        total += abs(cumulative) * (Fraction(positions[b]) - Fraction(positions[a]))
    return total


def brute_force_w1(positions: Sequence[Fraction], phi: Sequence[Fraction], psi: Sequence[Fraction]) -> Fraction:
    """
    max Σ f(x)(φ − ψ)(x) over 1-Lipschitz f with f(x_0) = 0: the optimum sits
    on a vertex where every adjacent step of f is ±(gap).
    """
    order = sorted(range(len(positions)), key=lambda k: positions[k])
    best = Fraction(0)
    for signs in itertools.product((1, -1), repeat=len(order) - 1):
        f = {order[0]: Fraction(0)}
        for sign, (a, b) in zip(signs, zip(order, order[1:])):
            f[b] = f[a] + sign * (Fraction(positions[b]) - Fraction(positions[a]))
        best = max(best, sum(f[k] * (Fraction(phi[k]) - Fraction(psi[k])) for k in order))
    return best


def dense_dirac(t) -> np.ndarray:
    return t.dirac_operator().to_sparse().toarray()


def dense_commutator(t, f) -> np.ndarray:
    D = dense_dirac(t)
    L = t.lambda_E(f).toarray()
    return D @ L - L @ D


def dense_spectrum(t) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(dense_dirac(t)))


def solenoid_ball_count(p: int, d: int, n: int) -> int:
    """|B(p^n)| for max{max-norm, 𝔽}: (2p^{2n} + 1)^d"""
    return (2 * p ** (2 * n) + 1) ** d


def spectral_norm(m) -> float:
    m = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def column_norms(rows: List[List[float]]) -> List[float]:
    return [float(np.linalg.norm(col)) for col in np.asarray(rows, dtype=float).T]
