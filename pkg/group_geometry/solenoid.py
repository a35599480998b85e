"""
The solenoid groups ℤ[1/p]^d filtered by G_n = (p^{-n}ℤ)^d.

Coordinates are kept as (a, n) pairs meaning a/p^n with n = 0 or p ∤ a,
so every element has exactly one representation.
"""
import itertools
import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from group_geometry.base import BaseGroupFamily, GroupElement
from group_geometry.scales import Scale
from helpers.constants import FAMILY_SOLENOID, NORM_CHOICES

Rational = Union[int, Fraction, str]


class SolenoidGroup(BaseGroupFamily):
    """The group ℤ[1/p]^d with its p-adic level filtration"""

    tag = FAMILY_SOLENOID

    def __init__(self, p: int, d: int = 1, norm: str = "max"):
        if not isprime(p):
            raise ValueError(f"p must be prime, got {p}")
        if d < 1:
            raise ValueError(f"rank d must be positive, got {d}")
        if norm not in NORM_CHOICES:
            raise ValueError(f"unknown norm selector {norm!r}, expected one of {NORM_CHOICES}")
        self.p = int(p)
        self.d = int(d)
        self.norm = norm
        self._identity = GroupElement(self.key, tuple((0, 0) for _ in range(self.d)), self)

    @property
    def key(self) -> str:
        return f"solenoid(p={self.p},d={self.d})"

    def reduce(self, value: Rational) -> Tuple[int, int]:
        """Lowest p-terms (a, n) of a rational whose denominator is a power of p"""
        frac = Fraction(value)
        denominator, n = frac.denominator, 0
        while denominator % self.p == 0:
            denominator //= self.p
            n += 1
        if denominator != 1:
            raise ValueError(f"{frac} is not in ℤ[1/{self.p}]")
        return frac.numerator, n

    def element(self, *values: Rational) -> GroupElement:
        """Build an element from d rationals, e.g. element('5/8', '1/2')"""
        if len(values) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(values)}")
        return GroupElement(self.key, tuple(self.reduce(v) for v in values), self)

    def fractions(self, g: GroupElement) -> Tuple[Fraction, ...]:
        return tuple(Fraction(a, self.p ** n) for a, n in g.coords)

    def identity(self) -> GroupElement:
        return self._identity

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self.check_same_family(g, h)
        return self.element(*(x + y for x, y in zip(self.fractions(g), self.fractions(h))))

    def inverse(self, g: GroupElement) -> GroupElement:
        return GroupElement(self.key, tuple((-a, n) for a, n in g.coords), self)

    def level(self, g: GroupElement) -> int:
        return max(n for _, n in g.coords)

    def coordinates(self, g: GroupElement) -> list:
        return [str(x) for x in self.fractions(g)]

    def sort_key(self, g: GroupElement):
        return (self.level(g), self.fractions(g))

    def default_scale(self) -> Scale:
        return Scale.geometric(self.p)

    def h_selectors(self) -> Sequence[str]:
        return NORM_CHOICES

    def _norm(self, vector: Sequence[float], selector: str) -> float:
        if selector == "max":
            return float(max(abs(x) for x in vector))
        if selector == "l1":
            return float(sum(abs(x) for x in vector))
        if selector == "l2":
            return float(math.sqrt(sum(float(x) ** 2 for x in vector)))
        raise ValueError(f"unknown norm selector {selector!r}")

    def h_length(self, g: GroupElement, selector: Optional[str] = None) -> float:
        return self._norm([float(x) for x in self.fractions(g)], selector or self.norm)

    def _numerator_bound(self, max_level: int, h_bound: float) -> int:
        return math.floor(Fraction(h_bound) * self.p ** max_level)

    def candidate_count(self, max_level: int, h_bound: float) -> int:
        return (2 * self._numerator_bound(max_level, h_bound) + 1) ** self.d

    def candidates(self, max_level: int, h_bound: float) -> Iterator[GroupElement]:
        bound = self._numerator_bound(max_level, h_bound)
        denominator = self.p ** max_level
        axis = [Fraction(a, denominator) for a in range(-bound, bound + 1)]
        for point in itertools.product(axis, repeat=self.d):
            yield self.element(*point)

    def nearest_in_level(self, g: GroupElement, n: int) -> GroupElement:
        """Coordinatewise rounding to the lattice (p^{-n}ℤ)^d"""
        scale = self.p ** n
        return self.element(*(Fraction(round(x * scale), scale) for x in self.fractions(g)))

    def subgroup_distance(self, g: GroupElement, n: int, selector: Optional[str] = None) -> float:
        if self.level(g) <= n:
            return 0.0
        nearest = self.fractions(self.nearest_in_level(g, n))
        return self._norm([x - y for x, y in zip(self.fractions(g), nearest)], selector or self.norm)

    def exact_hausdorff(self, n: int, selector: Optional[str] = None) -> Optional[float]:
        if (selector or self.norm) == "max":
            return 1.0 / (2 * self.p ** n)
        return None

    def random_element(self, rng: np.random.Generator, max_level: int, h_bound: float) -> GroupElement:
        level = int(rng.integers(0, max_level + 1))
        bound = self._numerator_bound(level, h_bound)
        denominator = self.p ** level
        return self.element(*(Fraction(int(rng.integers(-bound, bound + 1)), denominator) for _ in range(self.d)))
