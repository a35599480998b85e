"""
Length functions on the group families: 𝕃_H, the level length 𝔽 and their
combinations through monotone norms on ℝ².
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from group_geometry.base import BaseGroupFamily, GroupElement
from group_geometry.scales import Scale
from helpers.constants import COMBINATOR_CHOICES
from helpers.exceptions import CombinatorError, FamilyMismatchError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='lengths')

KIND_H = "H"
KIND_F = "F"
KIND_COMBINED = "combined"


@dataclass(frozen=True)
class Combinator:
    """A monotone norm N on ℝ² used as 𝕃 = N(𝕃_a, 𝕃_b)"""

    name: str
    fn: Callable[[float, float], float] = field(compare=False)

    def __call__(self, a: float, b: float) -> float:
        return float(self.fn(a, b))

    @property
    def c_first(self) -> float:
        """N(1, 0); a value ≤ r forces the first coordinate ≤ r / N(1, 0)"""
        return self(1.0, 0.0)

    @property
    def c_second(self) -> float:
        return self(0.0, 1.0)

    @classmethod
    def max(cls) -> "Combinator":
        return cls("max", lambda a, b: max(a, b))

    @classmethod
    def sum(cls) -> "Combinator":
        return cls("sum", lambda a, b: a + b)

    @classmethod
    def euclidean(cls) -> "Combinator":
        return cls("euclidean", lambda a, b: math.hypot(a, b))

    @classmethod
    def lp(cls, q: float) -> "Combinator":
        if q < 1:
            raise CombinatorError(f"ℓ^q with q={q} < 1 is not a norm")
        if math.isinf(q):
            return cls.max()
        return cls(f"l{q:g}", lambda a, b: (abs(a) ** q + abs(b) ** q) ** (1.0 / q))

    @classmethod
    def by_name(cls, name: str) -> "Combinator":
        if name == "max":
            return cls.max()
        if name == "sum":
            return cls.sum()
        if name == "euclidean":
            return cls.euclidean()
        if name.startswith("l") and name[1:].replace(".", "", 1).isdigit():
            return cls.lp(float(name[1:]))
        raise CombinatorError(f"unknown combinator {name!r}, expected one of {COMBINATOR_CHOICES} or l<q>")

    @classmethod
    def custom(cls, name: str, fn: Callable[[float, float], float], checks: int = 500, seed: int = 0) -> "Combinator":
        """
        Wrap a user norm after randomized checks on the nonnegative quadrant:
        monotonicity, positive homogeneity, the triangle inequality and
        N(x) = 0 only at the origin.
        """
        rng = np.random.default_rng(seed)
        slack = 1e-12
        if abs(fn(0.0, 0.0)) > slack or fn(1.0, 0.0) <= 0 or fn(0.0, 1.0) <= 0:
            raise CombinatorError(f"combinator {name} is not definite")
        for _ in range(checks):
            x, y = rng.uniform(0, 10, size=2), rng.uniform(0, 10, size=2)
            t = float(rng.uniform(0, 10))
            nx, ny = fn(*x), fn(*y)
            low, high = np.minimum(x, y), np.maximum(x, y)
            if fn(*low) > fn(*high) * (1 + slack) + slack:
                raise CombinatorError(f"combinator {name} is not monotone at {low}, {high}")
            if abs(fn(*(t * x)) - t * nx) > slack * max(1.0, t * nx) * 1e3:
                raise CombinatorError(f"combinator {name} is not homogeneous at {x}")
            if fn(*(x + y)) > (nx + ny) * (1 + slack) + slack:
                raise CombinatorError(f"combinator {name} violates the triangle inequality at {x}, {y}")
        return cls(name, fn)


class LengthFunction:
    """
    Evaluator for 𝕃_H, 𝔽 or a combination N(𝕃_a, 𝕃_b).

    Instances are immutable; build them with `h`, `f` and `combined`.
    """

    def __init__(
        self,
        group: BaseGroupFamily,
        kind: str,
        selector: Optional[str] = None,
        scale: Optional[Scale] = None,
        children: Tuple["LengthFunction", ...] = (),
        combinator: Optional[Combinator] = None,
    ):
        self.group = group
        self.kind = kind
        self.selector = selector
        self.scale = scale
        self.children = children
        self.combinator = combinator

    @classmethod
    def h(cls, group: BaseGroupFamily, selector: Optional[str] = None) -> "LengthFunction":
        if selector is not None and selector not in group.h_selectors():
            raise ValueError(f"selector {selector!r} is not valid for {group.key}")
        default = getattr(group, "norm", None) or getattr(group, "circle_length", None)
        return cls(group, KIND_H, selector=selector or default)

    @classmethod
    def f(cls, group: BaseGroupFamily, scale: Optional[Scale] = None) -> "LengthFunction":
        return cls(group, KIND_F, scale=scale or group.default_scale())

    @classmethod
    def combined(cls, a: "LengthFunction", b: "LengthFunction", combinator) -> "LengthFunction":
        if a.group.key != b.group.key:
            raise FamilyMismatchError(f"cannot combine lengths on {a.group.key} and {b.group.key}")
        if isinstance(combinator, str):
            combinator = Combinator.by_name(combinator)
        return cls(a.group, KIND_COMBINED, children=(a, b), combinator=combinator)

    @classmethod
    def standard(cls, group: BaseGroupFamily, combinator="max", selector: Optional[str] = None,
                 scale: Optional[Scale] = None) -> "LengthFunction":
        """N(𝕃_H, 𝔽), the proper length used for balls and truncations"""
        return cls.combined(cls.h(group, selector), cls.f(group, scale), combinator)

    def __call__(self, g: GroupElement) -> float:
        if self.kind == KIND_H:
            return self.group.h_length(g, self.selector)
        if self.kind == KIND_F:
            return length_F(g, self.scale)
        a, b = self.children
        return self.combinator(a(g), b(g))

    def _find(self, kind: str) -> Optional["LengthFunction"]:
        if self.kind == kind:
            return self
        for child in self.children:
            found = child._find(kind)
            if found is not None:
                return found
        return None

    @property
    def h_part(self) -> "LengthFunction":
        """The 𝕃_H constituent, or the family default when this length has none"""
        return self._find(KIND_H) or LengthFunction.h(self.group)

    @property
    def f_part(self) -> "LengthFunction":
        return self._find(KIND_F) or LengthFunction.f(self.group)

    def bounds(self, r: float) -> Tuple[float, float]:
        """
        (h_bound, f_bound) with 𝕃(g) ≤ r ⟹ 𝕃_H(g) ≤ h_bound and 𝔽(g) ≤ f_bound.
        Unconstrained parts are reported as infinity.
        """
        if self.kind == KIND_H:
            return r, math.inf
        if self.kind == KIND_F:
            return math.inf, r
        a, b = self.children
        ha, fa = a.bounds(r / self.combinator.c_first)
        hb, fb = b.bounds(r / self.combinator.c_second)
        return min(ha, hb), min(fa, fb)

    @property
    def is_proper(self) -> bool:
        h_bound, f_bound = self.bounds(1.0)
        if self.group.top_level is not None:
            return True
        if not math.isfinite(f_bound):
            return False
        return math.isfinite(h_bound) or self.group.levels_are_finite

    def describe(self) -> str:
        if self.kind == KIND_H:
            return f"L_H[{self.selector}]"
        if self.kind == KIND_F:
            return f"F[{self.scale.name}]"
        a, b = self.children
        return f"{self.combinator.name}({a.describe()}, {b.describe()})"

    def __repr__(self) -> str:
        return f"LengthFunction({self.describe()} on {self.group.key})"


def level(g: GroupElement) -> int:
    """Smallest n with g ∈ G_n"""
    return g.group.level(g)


def length_F(g: GroupElement, scale: Optional[Scale] = None) -> float:
    """𝔽(g): 0 at the identity, scale(level(g)) elsewhere (scale(0) on G_0∖{1})"""
    if g.is_identity:
        return 0.0
    scale = scale or g.group.default_scale()
    return scale(g.group.level(g))


def length_H(g: GroupElement, selector: Optional[str] = None) -> float:
    return g.group.h_length(g, selector)


def combine(a: LengthFunction, b: LengthFunction, combinator="max") -> LengthFunction:
    return LengthFunction.combined(a, b, combinator)
