"""
Finite commutative quantum compact metric spaces.

A FiniteQcms is a point set with a polyhedral Lipschitz seminorm
L(f) = max_i |⟨c_i, f⟩|, each form c_i stored sparsely with Fraction
coefficients. Every LP gauges f(z₀) = 0 at the base point.
"""
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from helpers.config import ConfigHelper
from helpers.exceptions import BudgetExceededError, DegenerateSeminormError
from helpers.logger import LoggerHelper
from quantum_metric.lp import F, Number, require_optimal, solve_exact_system, solve_lp

logger = LoggerHelper.get_logger(__name__, prefix='qcms')

Form = Dict[int, Fraction]


@dataclass(frozen=True)
class FiniteQcms:
    points: Tuple[Hashable, ...]
    forms: Tuple[Form, ...]
    base: int = 0
    name: str = ""

    def __post_init__(self):
        if not self.points:
            raise ValueError("a quantum metric space needs at least one point")
        if not 0 <= self.base < len(self.points):
            raise ValueError(f"base point {self.base} out of range")
        for form in self.forms:
            if any(not 0 <= k < len(self.points) for k in form):
                raise ValueError("form refers to a point outside the space")
            if sum(form.values(), Fraction(0)) != 0:
                raise ValueError("every form must vanish on constants")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        """Whether LPs over this space run in exact arithmetic"""
        return self.size <= ConfigHelper().get_exact_lp_max_points()

    def value(self, f: Sequence[Number]) -> Number:
        """L(f)"""
        if not self.forms:
            return 0
        return max(abs(sum(c * f[k] for k, c in form.items())) for form in self.forms)

    def matrix(self) -> np.ndarray:
        rows = np.zeros((len(self.forms), self.size))
        for i, form in enumerate(self.forms):
            for k, c in form.items():
                rows[i, k] = float(c)
        return rows

    def kernel_is_constants(self) -> bool:
        """L(f) = 0 only for constant f"""
        if self.size == 1:
            return True
        if not self.forms:
            return False
        return int(np.linalg.matrix_rank(self.matrix())) == self.size - 1

    def scaled(self, t: Number) -> "FiniteQcms":
        """The space with seminorm t·L"""
        t = F(t)
        if t <= 0:
            raise ValueError("scale must be positive")
        return FiniteQcms(self.points, tuple({k: t * c for k, c in form.items()} for form in self.forms),
                          self.base, self.name)

    @classmethod
    def from_line(cls, positions: Sequence[Number], pairs: str = "all", labels: Optional[Sequence[Hashable]] = None,
                  support: Optional[Sequence[int]] = None, base: int = 0, name: str = "") -> "FiniteQcms":
        """
        Difference quotients |f(x) − f(y)| / |x − y| over points of the line.
        `support` restricts the quotients to a subset of the points.
        """
        positions = [F(x) for x in positions]
        labels = tuple(labels) if labels is not None else tuple(range(len(positions)))
        return cls(labels, tuple(line_forms(positions, pairs, support)), base, name)

    @classmethod
    def from_metric(cls, matrix: Sequence[Sequence[Number]], labels: Optional[Sequence[Hashable]] = None,
                    base: int = 0, name: str = "") -> "FiniteQcms":
        """Metric-Lipschitz seminorm of a finite metric space"""
        size = len(matrix)
        forms = []
        for i, j in itertools.combinations(range(size), 2):
            d = F(matrix[i][j])
            if d <= 0:
                raise ValueError(f"distance between distinct points {i} and {j} must be positive")
            forms.append({i: 1 / d, j: -1 / d})
        labels = tuple(labels) if labels is not None else tuple(range(size))
        return cls(labels, tuple(forms), base, name)

    @classmethod
    def sum_of(cls, a: "FiniteQcms", b: "FiniteQcms", weight: Number = 1, name: str = "") -> "FiniteQcms":
        """L_a + w·L_b through the forms c_i ± w·d_j"""
        if a.points != b.points:
            raise ValueError("sum of seminorms needs a common point set")
        w = F(weight)
        forms = []
        for c, d in itertools.product(a.forms, b.forms):
            for sign in (1, -1):
                combined = dict(c)
                for k, v in d.items():
                    combined[k] = combined.get(k, Fraction(0)) + sign * w * v
                forms.append({k: v for k, v in combined.items() if v != 0})
        return cls(a.points, tuple(forms), a.base, name)


def line_forms(positions: Sequence[Fraction], pairs: str = "all", support: Optional[Sequence[int]] = None) -> List[Form]:
    indices = list(support) if support is not None else list(range(len(positions)))
    if pairs == "all":
        candidates = itertools.combinations(indices, 2)
    elif pairs == "adjacent":
        ordered = sorted(indices, key=lambda k: positions[k])
        candidates = zip(ordered, ordered[1:])
    else:
        raise ValueError(f"pairs must be 'all' or 'adjacent', got {pairs!r}")
    forms = []
    for i, j in candidates:
        gap = abs(positions[i] - positions[j])
        if gap == 0:
            raise ValueError(f"points {i} and {j} share a position")
        forms.append({i: 1 / gap, j: -1 / gap})
    return forms


def dirac(q: FiniteQcms, i: int) -> List[Fraction]:
    state = [Fraction(0)] * q.size
    state[i] = Fraction(1)
    return state


def _check_state(q: FiniteQcms, state: Sequence[Number]):
    if len(state) != q.size:
        raise ValueError(f"state has {len(state)} entries, space has {q.size} points")
    if any(v < 0 for v in state):
        raise ValueError("states must be nonnegative")
    total = sum(state)
    if abs(total - 1) > 1e-12:
        raise ValueError(f"state sums to {total}, not 1")


def ball_constraints(q: FiniteQcms, columns: Sequence[int], width: int, bound: Number = 1):
    """Rows ±⟨c_i, f⟩ ≤ bound over the given variable columns"""
    position = {k: col for col, k in enumerate(columns)}
    rows, rhs = [], []
    for form in q.forms:
        row = [Fraction(0)] * width
        for k, c in form.items():
            if k in position:
                row[position[k]] = c
        rows.append(row)
        rhs.append(bound)
        rows.append([-v for v in row])
        rhs.append(bound)
    return rows, rhs


def gauged_columns(q: FiniteQcms) -> List[int]:
    return [k for k in range(q.size) if k != q.base]


def kantorovich(q: FiniteQcms, phi: Sequence[Number], psi: Sequence[Number], exact: Optional[bool] = None) -> Number:
    """mk_L(φ, ψ) = max ⟨φ − ψ, f⟩ over L(f) ≤ 1, f(z₀) = 0"""
    _check_state(q, phi)
    _check_state(q, psi)
    columns = gauged_columns(q)
    difference = [F(a) - F(b) for a, b in zip(phi, psi)]
    if not columns or all(d == 0 for d in difference):
        return Fraction(0)
    objective = [difference[k] for k in columns]
    rows, rhs = ball_constraints(q, columns, len(columns))
    exact = q.exact if exact is None else exact
    result = require_optimal(solve_lp(objective, rows, rhs, exact=exact), f"kantorovich on {q.name or 'space'}")
    return result.value


def distance_table(q: FiniteQcms) -> List[List[Number]]:
    """Pairwise Kantorovich distances between Dirac states"""
    table = [[Fraction(0)] * q.size for _ in range(q.size)]
    for i, j in itertools.combinations(range(q.size), 2):
        table[i][j] = table[j][i] = kantorovich(q, dirac(q, i), dirac(q, j))
    return table


def qdiam(q: FiniteQcms) -> Number:
    """Diameter of the state space; attained between Dirac states"""
    if q.size == 1:
        return Fraction(0)
    return max(value for row in distance_table(q) for value in row)


@dataclass
class NormBoundReport:
    deviation: float
    bound: float
    slack: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def norm_bound_check(q: FiniteQcms, f: Sequence[Number], mu: Sequence[Number],
                     diameter: Optional[Number] = None, tol: Optional[float] = None) -> NormBoundReport:
    """‖f − μ(f)1‖_∞ ≤ L(f)·qdiam"""
    _check_state(q, mu)
    tol = tol if tol is not None else ConfigHelper().get_tolerance()
    diameter = qdiam(q) if diameter is None else diameter
    mean = sum(m * v for m, v in zip(mu, f))
    deviation = float(max(abs(v - mean) for v in f))
    bound = float(q.value(f)) * float(diameter)
    return NormBoundReport(deviation, bound, bound - deviation, deviation <= bound + tol * max(1.0, bound))


@dataclass
class VertexSet:
    vertices: List[Tuple[Number, ...]]
    exhaustive: bool

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def unit_ball_vertices(q: FiniteQcms, gauge: Optional[Sequence[Number]] = None, budget: Optional[int] = None,
                       samples: Optional[int] = None, seed: Optional[int] = None) -> VertexSet:
    """
    Vertices of {L(f) ≤ 1, ⟨g, f⟩ = 0}, g defaulting to the base point
    evaluation. Exhaustive over choices of active forms when the count fits
    the budget; otherwise LP maxima of random directions.
    """
    config = ConfigHelper()
    budget = budget or config.get_vertex_budget()
    gauge = [F(v) for v in gauge] if gauge is not None else dirac(q, q.base)
    m = q.size
    if m == 1:
        return VertexSet([(Fraction(0),)], True)

    dim = m - 1
    combinations = math.comb(len(q.forms), dim) * 2 ** dim
    if combinations <= budget:
        found = set()
        for subset in itertools.combinations(q.forms, dim):
            matrix = [[form.get(k, Fraction(0)) for k in range(m)] for form in subset] + [gauge]
            for signs in itertools.product((1, -1), repeat=dim):
                solution = solve_exact_system(matrix, list(signs) + [0])
                if solution is None:
                    break
                if q.value(solution) <= 1:
                    found.add(tuple(solution))
        logger.debug(f"Enumerated {len(found)} vertices from {combinations} active sets")
        return VertexSet(sorted(found), True)

    samples = samples or config.get_sample_count()
    rng = np.random.default_rng(config.get_seed() if seed is None else seed)
    rows, rhs = ball_constraints(q, range(m), m)
    found = {}
    for _ in range(samples):
        direction = rng.normal(size=m)
        result = require_optimal(solve_lp(direction, rows, rhs, [gauge], [0], exact=q.exact), "vertex sampling")
        key = tuple(round(float(v), 9) for v in result.x)
        found.setdefault(key, tuple(result.x))
    logger.info(f"Vertex count {combinations} exceeds budget {budget}; sampled {len(found)} vertices")
    return VertexSet(list(found.values()), False)


@dataclass
class NetReport:
    centers: List[np.ndarray]
    epsilon: float
    max_gap: float
    checked: int
    volume_bound: float
    exhaustive: bool
    verified: bool = field(init=False)

    def __post_init__(self):
        self.verified = self.max_gap <= self.epsilon

    def to_dict(self) -> dict:
        return {
            "size": len(self.centers),
            "epsilon": self.epsilon,
            "max_gap": self.max_gap,
            "checked": self.checked,
            "volume_bound": self.volume_bound,
            "exhaustive": self.exhaustive,
            "verified": self.verified,
        }


def _sup_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return np.abs(points[:, None, :] - centers[None, :, :]).max(axis=2).min(axis=1)


def epsilon_net(q: FiniteQcms, mu: Sequence[Number], epsilon: float, samples: Optional[int] = None,
                seed: Optional[int] = None, budget: Optional[int] = None) -> NetReport:
    """
    Greedy farthest-point ε-net (sup norm) of {L ≤ 1, μ(f) = 0}. Candidates
    are the polytope's vertices plus random convex combinations of them;
    the net is then checked on fresh samples.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    _check_state(q, mu)
    config = ConfigHelper()
    samples = samples or config.get_sample_count()
    budget = budget or config.get_vertex_budget()
    rng = np.random.default_rng(config.get_seed() if seed is None else seed)

    vertices = unit_ball_vertices(q, gauge=mu, budget=budget, seed=seed)
    corners = np.array([[float(v) for v in vertex] for vertex in vertices])

    def draw(count: int) -> np.ndarray:
        weights = rng.dirichlet(np.ones(len(corners)), size=count)
        return weights @ corners

    pool = np.vstack([corners, draw(samples)])
    centers = [np.zeros(q.size)]
    gaps = _sup_distances(pool, np.array(centers))
    while gaps.max() > epsilon / 2:
        if len(centers) >= budget:
            raise BudgetExceededError(f"ε-net needs more than {budget} centers", required=len(centers) + 1,
                                      budget=budget)
        centers.append(pool[int(gaps.argmax())])
        gaps = np.minimum(gaps, np.abs(pool - centers[-1]).max(axis=1))

    check = draw(samples)
    max_gap = float(_sup_distances(check, np.array(centers)).max()) if len(check) else 0.0
    radius = float(np.abs(corners).max()) if corners.size else 0.0
    volume_bound = (1 + 4 * radius / epsilon) ** (q.size - 1)
    return NetReport(centers, float(epsilon), max_gap, len(check), volume_bound, vertices.exhaustive)


def ensure_proper(q: FiniteQcms):
    """Raise when the seminorm kernel is larger than the constants"""
    if not q.kernel_is_constants():
        raise DegenerateSeminormError(f"seminorm on {q.name or 'space'} vanishes on non-constant functions")
