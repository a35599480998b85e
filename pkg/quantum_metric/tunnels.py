"""
Tunnels between finite quantum metric spaces.

A tunnel joins (X, L_A) and (Y, L_B) through a correspondence of point
pairs: T(a, b) = max{L_A(a), L_B(b), (1/ε)·max_(x,y) |a(x) − b(y)|}.
It is itself a FiniteQcms on X ⊔ Y whose forms are those of both sides
plus one bridge form per pair.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from helpers.config import ConfigHelper
from helpers.logger import LoggerHelper
from quantum_metric.lp import F, Number, require_optimal, solve_lp
from quantum_metric.qcms import FiniteQcms, ball_constraints, dirac, gauged_columns, kantorovich, unit_ball_vertices

logger = LoggerHelper.get_logger(__name__, prefix='tunnels')

Pair = Tuple[int, int]


@dataclass(frozen=True)
class TunnelSpec:
    left: FiniteQcms
    right: FiniteQcms
    pairs: Tuple[Pair, ...]
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "epsilon", F(self.epsilon))
        object.__setattr__(self, "pairs", tuple((int(x), int(y)) for x, y in self.pairs))
        if self.epsilon <= 0:
            raise ValueError("bridge epsilon must be positive")
        for x, y in self.pairs:
            if not (0 <= x < self.left.size and 0 <= y < self.right.size):
                raise ValueError(f"pair ({x}, {y}) out of range")
        if {x for x, _ in self.pairs} != set(range(self.left.size)):
            raise ValueError("every left point needs a partner")
        if {y for _, y in self.pairs} != set(range(self.right.size)):
            raise ValueError("every right point needs a partner")

    @classmethod
    def from_point_map(cls, left: FiniteQcms, right: FiniteQcms, point_map: Sequence[int],
                       epsilon: Number) -> "TunnelSpec":
        """Bridge a ↦ a∘p for a surjective point map p: Y → X"""
        if len(point_map) != right.size:
            raise ValueError("point map needs one image per right point")
        return cls(left, right, tuple((x, y) for y, x in enumerate(point_map)), epsilon)

    @property
    def offset(self) -> int:
        return self.left.size

    @cached_property
    def space(self) -> FiniteQcms:
        """The tunnel seminorm on X ⊔ Y"""
        shifted = tuple({k + self.offset: c for k, c in form.items()} for form in self.right.forms)
        weight = 1 / self.epsilon
        bridges = tuple({x: weight, self.offset + y: -weight} for x, y in self.pairs)
        points = tuple(("A", p) for p in self.left.points) + tuple(("B", p) for p in self.right.points)
        return FiniteQcms(points, self.left.forms + shifted + bridges, self.left.base, "tunnel")

    def value(self, a: Sequence[Number], b: Sequence[Number]) -> Number:
        return self.space.value(list(a) + list(b))

    def partners(self, side: str) -> Dict[int, List[int]]:
        table: Dict[int, List[int]] = {}
        for x, y in self.pairs:
            if side == "left":
                table.setdefault(x, []).append(y)
            else:
                table.setdefault(y, []).append(x)
        return table

    def reversed(self) -> "TunnelSpec":
        return TunnelSpec(self.right, self.left, tuple((y, x) for x, y in self.pairs), self.epsilon)


def distance_to_face(q: FiniteQcms, mu: Sequence[Number], face: Sequence[int], exact: Optional[bool] = None) -> Number:
    """
    mk_L(μ, S(face)) = max_f ⟨μ, f⟩ − max_{w ∈ face} f(w) over L(f) ≤ 1,
    where S(face) is the set of states supported on the face points.
    """
    columns = gauged_columns(q)
    width = len(columns) + 1
    rows, rhs = ball_constraints(q, columns, width)
    position = {k: col for col, k in enumerate(columns)}
    for w in face:
        row = [Fraction(0)] * width
        if w in position:
            row[position[w]] = Fraction(1)
        row[-1] = Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    objective = [F(mu[k]) for k in columns] + [Fraction(-1)]
    exact = q.exact if exact is None else exact
    return require_optimal(solve_lp(objective, rows, rhs, exact=exact), "distance to face").value


@dataclass
class ExtentReport:
    upper: float
    lower: float
    vertex_lower: float
    sampled_lower: float
    epsilon: float
    samples: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def tunnel_extent_bounds(t: TunnelSpec, samples: Optional[int] = None, seed: Optional[int] = None) -> ExtentReport:
    """
    Bracket on the extent max_j Haus(π_j*S(A_j), S(D)).

    upper pairs each Dirac state with its closest correspondence partner;
    convexity of the pairing bound extends it to every state. lower is the
    exact distance of each Dirac state of D to the opposing pullback simplex,
    raised further by Dirichlet-sampled states.
    """
    config = ConfigHelper()
    samples = config.get_sample_count() if samples is None else samples
    rng = np.random.default_rng(config.get_seed() if seed is None else seed)
    D = t.space
    left_face = list(range(t.offset))
    right_face = list(range(t.offset, D.size))

    pair_distance = {
        (x, y): float(kantorovich(D, dirac(D, x), dirac(D, t.offset + y)))
        for x, y in t.pairs
    }
    upper = 0.0
    for x, ys in t.partners("left").items():
        upper = max(upper, min(pair_distance[(x, y)] for y in ys))
    for y, xs in t.partners("right").items():
        upper = max(upper, min(pair_distance[(x, y)] for x in xs))

    vertex_lower = 0.0
    for z in range(D.size):
        opposing = right_face if z < t.offset else left_face
        vertex_lower = max(vertex_lower, float(distance_to_face(D, dirac(D, z), opposing)))

    sampled_lower = 0.0
    for weights in rng.dirichlet(np.ones(D.size), size=samples):
        weights = [Fraction(w).limit_denominator(1000) for w in weights]
        total = sum(weights)
        mu = [w / total for w in weights]
        distance = max(float(distance_to_face(D, mu, left_face)), float(distance_to_face(D, mu, right_face)))
        sampled_lower = max(sampled_lower, distance)

    lower = max(vertex_lower, sampled_lower)
    logger.info(f"Extent bracket [{lower:.6g}, {upper:.6g}] with ε = {float(t.epsilon):.6g}")
    return ExtentReport(upper, lower, vertex_lower, sampled_lower, float(t.epsilon), samples)


def _closest_partner(source: Sequence[Number], target: FiniteQcms, pairs: Sequence[Pair], bound: Optional[Number],
                     weight: Number = 1, exact: Optional[bool] = None) -> Tuple[Number, List[Number]]:
    """
    Minimize τ over b on the target points subject to weight·|a(x) − b(y)| ≤ τ
    on pairs and either L(b) ≤ bound, or L(b) ≤ τ when bound is None.
    """
    width = target.size + 1
    columns = list(range(target.size))
    if bound is None:
        rows, rhs = ball_constraints(target, columns, width, 0)
        for row in rows:
            row[-1] = Fraction(-1)
    else:
        rows, rhs = ball_constraints(target, columns, width, bound)
    weight = F(weight)
    for x, y in pairs:
        ax = F(source[x])
        row = [Fraction(0)] * width
        row[y] = -weight
        row[-1] = Fraction(-1)
        rows.append(row)
        rhs.append(-weight * ax)
        row = [Fraction(0)] * width
        row[y] = weight
        row[-1] = Fraction(-1)
        rows.append(row)
        rhs.append(weight * ax)
    objective = [Fraction(0)] * target.size + [Fraction(-1)]
    if exact is None:
        exact = width <= ConfigHelper().get_exact_lp_max_points() and all(
            isinstance(v, (int, Fraction)) for v in source)
    result = require_optimal(solve_lp(objective, rows, rhs, exact=exact), "closest partner")
    return -result.value, list(result.x[:-1])


def _vector(values) -> List[float]:
    return [float(v) for v in values]


@dataclass
class QuotientReport:
    side: str
    vertices: int
    exhaustive: bool
    violations: int
    worst_excess: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.violations == 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def quotient_check(t: TunnelSpec, side: str = "left", budget: Optional[int] = None,
                   samples: Optional[int] = None, seed: Optional[int] = None) -> QuotientReport:
    """
    The projection of D onto one side is a quantum isometry:
    min_b max(L_other(b), bridge(a, b)) ≤ L_side(a) at every vertex a of the
    side's unit ball. Convexity and homogeneity carry the vertex check to
    the whole domain when the enumeration is exhaustive.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    oriented = t if side == "left" else t.reversed()
    tol = ConfigHelper().get_tolerance()
    vertices = unit_ball_vertices(oriented.left, budget=budget, samples=samples, seed=seed)
    violations, worst = 0, float("-inf")
    for a in vertices:
        level = oriented.left.value(a)
        tau, _ = _closest_partner(a, oriented.right, oriented.pairs, None, 1 / oriented.epsilon)
        excess = tau - level
        worst = max(worst, float(excess))
        limit = 0 if isinstance(excess, Fraction) else tol * max(1.0, float(level))
        if excess > limit:
            violations += 1
    return QuotientReport(side, len(vertices), vertices.exhaustive, violations, worst if len(vertices) else 0.0)


def bridge_distance(a: Sequence[Number], right: FiniteQcms, pairs: Sequence[Pair], bound: Number) -> Number:
    """min ‖π(a) − b‖ over b with L_B(b) ≤ bound"""
    tau, _ = _closest_partner(a, right, pairs, bound)
    return tau


@dataclass
class BridgeBuilderReport:
    holds: bool
    exhaustive: bool
    checked: int
    witnesses: List[dict]
    violation: Optional[dict] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _one_direction(source: FiniteQcms, target: FiniteQcms, pairs: Sequence[Pair], epsilon: Fraction, side: str,
                   budget, samples, seed, tol: float):
    vertices = unit_ball_vertices(source, budget=budget, samples=samples, seed=seed)
    witnesses = []
    for a in vertices:
        level = source.value(a)
        if level == 0:
            continue
        tau, b = _closest_partner(a, target, pairs, level)
        limit = epsilon * level
        record = {"side": side, "vertex": _vector(a), "partner": _vector(b),
                  "distance": float(tau), "bound": float(limit)}
        strict = tau < limit if isinstance(tau, Fraction) else tau < float(limit) - tol * max(1.0, float(limit))
        if not strict:
            return vertices, witnesses, record
        witnesses.append(record)
    return vertices, witnesses, None


def bridge_builder_check(left: FiniteQcms, right: FiniteQcms, pairs: Sequence[Pair], epsilon: Number,
                         budget: Optional[int] = None, samples: Optional[int] = None,
                         seed: Optional[int] = None) -> BridgeBuilderReport:
    """
    Both bridge-builder conditions at unit-ball vertices: every a has a b
    with L_B(b) ≤ L_A(a) and ‖π(a) − b‖ < ε·L_A(a), and symmetrically.
    The pairs encode ‖π(a) − b‖ as max |a(x) − b(y)|.
    """
    epsilon = F(epsilon)
    tol = ConfigHelper().get_tolerance()
    flipped = [(y, x) for x, y in pairs]
    left_vertices, left_witnesses, violation = _one_direction(left, right, pairs, epsilon, "left",
                                                              budget, samples, seed, tol)
    checked = len(left_vertices)
    exhaustive = left_vertices.exhaustive
    right_witnesses = []
    if violation is None:
        right_vertices, right_witnesses, violation = _one_direction(right, left, flipped, epsilon, "right",
                                                                    budget, samples, seed, tol)
        checked += len(right_vertices)
        exhaustive = exhaustive and right_vertices.exhaustive
    if violation is not None:
        logger.info(f"Bridge builder fails on a {violation['side']} vertex: "
                    f"distance {violation['distance']:.6g} ≥ {violation['bound']:.6g}")
    return BridgeBuilderReport(violation is None, exhaustive, checked, left_witnesses + right_witnesses, violation)
