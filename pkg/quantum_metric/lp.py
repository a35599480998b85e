"""
Linear programs over free variables: maximize cᵀx subject to A_ub x ≤ b_ub
and A_eq x = b_eq.

Small problems go through an exact two-phase tableau simplex over Fractions
(Bland's rule); larger ones through HiGHS with a duality-gap check.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from helpers.config import ConfigHelper
from helpers.exceptions import DegenerateSeminormError, LPError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='lp')

Number = Union[int, float, Fraction]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def F(x: Number) -> Fraction:
    """Exact Fraction of an int, Fraction or float"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


@dataclass
class LPResult:
    status: str
    value: Optional[Number]
    x: List[Number] = field(default_factory=list)
    backend: str = "exact"
    gap: float = 0.0

    @property
    def exact(self) -> bool:
        return self.backend == "exact"


class Tableau:
    """
    Dense simplex tableau over Fractions.

    Row i holds the constraint coefficients followed by the right-hand
    side; `basis[i]` is the column basic in row i.
    """

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.T = rows
        self.basis = basis
        self.iterations = 0

    @property
    def width(self) -> int:
        return len(self.T[0]) - 1 if self.T else 0

    def pivot(self, r: int, j: int):
        row = self.T[r]
        p = row[j]
        self.T[r] = row = [v / p for v in row]
        for i, other in enumerate(self.T):
            if i != r and other[j] != 0:
                factor = other[j]
                self.T[i] = [a - factor * b for a, b in zip(other, row)]
        self.basis[r] = j
        self.iterations += 1

    def value(self, objective: Sequence[Fraction]) -> Fraction:
        return sum((objective[b] * self.T[i][-1] for i, b in enumerate(self.basis)), Fraction(0))

    def optimize(self, objective: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        """Maximize objective·x over the allowed columns with Bland's rule"""
        while True:
            entering = None
            in_basis = set(self.basis)
            for j in range(self.width):
                if not allowed[j] or j in in_basis:
                    continue
                reduced = objective[j] - sum(
                    (objective[b] * self.T[i][j] for i, b in enumerate(self.basis) if self.T[i][j] != 0),
                    Fraction(0),
                )
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            leaving, best = None, None
            for i, row in enumerate(self.T):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                return UNBOUNDED
            self.pivot(leaving, entering)


def _solve_exact(c, A_ub, b_ub, A_eq, b_eq) -> LPResult:
    n = len(c)
    m_ub, m_eq = len(A_ub), len(A_eq)
    structural = 2 * n
    rows, needs_artificial = [], []
    for i in range(m_ub):
        coeffs = [F(a) for a in A_ub[i]]
        slack = [Fraction(0)] * m_ub
        slack[i] = Fraction(1)
        rhs = F(b_ub[i])
        row = coeffs + [-a for a in coeffs] + slack
        if rhs < 0:
            row, rhs = [-a for a in row], -rhs
            needs_artificial.append(True)
        else:
            needs_artificial.append(False)
        rows.append((row, rhs))
    for i in range(m_eq):
        coeffs = [F(a) for a in A_eq[i]]
        rhs = F(b_eq[i])
        row = coeffs + [-a for a in coeffs] + [Fraction(0)] * m_ub
        if rhs < 0:
            row, rhs = [-a for a in row], -rhs
        needs_artificial.append(True)
        rows.append((row, rhs))

    artificial_count = sum(needs_artificial)
    width = structural + m_ub + artificial_count
    table, basis, a = [], [], 0
    for i, (row, rhs) in enumerate(rows):
        extra = [Fraction(0)] * artificial_count
        if needs_artificial[i]:
            extra[a] = Fraction(1)
            basis.append(structural + m_ub + a)
            a += 1
        else:
            basis.append(structural + i)
        table.append(row + extra + [rhs])
    tableau = Tableau(table, basis)
    is_artificial = [j >= structural + m_ub for j in range(width)]

    if artificial_count:
        phase_one = [Fraction(-1) if is_artificial[j] else Fraction(0) for j in range(width)]
        tableau.optimize(phase_one, [True] * width)
        if tableau.value(phase_one) < 0:
            return LPResult(INFEASIBLE, None)
        # drive zero-level artificials out of the basis, dropping redundant rows
        r = 0
        while r < len(tableau.T):
            if is_artificial[tableau.basis[r]]:
                column = next((j for j in range(width) if not is_artificial[j] and tableau.T[r][j] != 0), None)
                if column is None:
                    del tableau.T[r]
                    del tableau.basis[r]
                    continue
                tableau.pivot(r, column)
            r += 1

    objective = [F(v) for v in c] + [-F(v) for v in c] + [Fraction(0)] * (m_ub + artificial_count)
    allowed = [not flag for flag in is_artificial]
    status = tableau.optimize(objective, allowed) if tableau.T else OPTIMAL
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None)
    solution = [Fraction(0)] * width
    for i, b in enumerate(tableau.basis):
        solution[b] = tableau.T[i][-1]
    x = [solution[j] - solution[n + j] for j in range(n)]
    value = sum((F(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x, "exact")


def _solve_highs(c, A_ub, b_ub, A_eq, b_eq, tolerance: float) -> LPResult:
    c = np.asarray([float(v) for v in c])
    kwargs = {"bounds": [(None, None)] * len(c), "method": "highs-ds"}
    if len(A_ub):
        kwargs["A_ub"] = np.asarray([[float(v) for v in row] for row in A_ub])
        kwargs["b_ub"] = np.asarray([float(v) for v in b_ub])
    if len(A_eq):
        kwargs["A_eq"] = np.asarray([[float(v) for v in row] for row in A_eq])
        kwargs["b_eq"] = np.asarray([float(v) for v in b_eq])
    result = linprog(-c, **kwargs)
    if result.status == 2:
        return LPResult(INFEASIBLE, None, backend="highs")
    if result.status == 3:
        return LPResult(UNBOUNDED, None, backend="highs")
    if result.status != 0:
        raise LPError(f"HiGHS failed: {result.message}")
    primal = float(result.fun)
    dual = 0.0
    if len(A_ub):
        dual += float(np.dot(kwargs["b_ub"], result.ineqlin.marginals))
    if len(A_eq):
        dual += float(np.dot(kwargs["b_eq"], result.eqlin.marginals))
    gap = abs(primal - dual)
    if gap > 1e3 * tolerance * max(1.0, abs(primal)):
        logger.warning(f"HiGHS duality gap {gap:.3g} above tolerance")
    return LPResult(OPTIMAL, -primal, [float(v) for v in result.x], "highs", gap)


def solve_lp(c: Sequence[Number], A_ub: Sequence[Sequence[Number]] = (), b_ub: Sequence[Number] = (),
             A_eq: Sequence[Sequence[Number]] = (), b_eq: Sequence[Number] = (),
             exact: Optional[bool] = None) -> LPResult:
    """
    Maximize cᵀx over free x. `exact=None` picks the exact backend when the
    variable count is within the configured exact point limit.
    """
    config = ConfigHelper()
    if exact is None:
        exact = len(c) <= config.get_exact_lp_max_points()
    if exact:
        return _solve_exact(c, A_ub, b_ub, A_eq, b_eq)
    return _solve_highs(c, A_ub, b_ub, A_eq, b_eq, config.get_tolerance())


def require_optimal(result: LPResult, context: str) -> LPResult:
    """Raise on infeasible or unbounded results"""
    if result.status == UNBOUNDED:
        raise DegenerateSeminormError(f"{context}: LP unbounded, the seminorm kernel is larger than the constants")
    if result.status == INFEASIBLE:
        raise LPError(f"{context}: LP infeasible")
    return result


def solve_exact_system(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> Optional[List[Fraction]]:
    """Solve a square system over Fractions; None when singular"""
    size = len(matrix)
    rows = [[F(v) for v in row] + [F(b)] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [row[-1] for row in rows]
