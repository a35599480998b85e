"""
Roots-of-unity towers ℤ(α), the Bunce-Deddens group ℤ(α)×ℤ, and the finite
test group μ_{α_K}.

A root ζ = exp(2πi r/α_l) is stored as (r, l) at its minimal level l; the
integer factor z is 0 when the family has none.
"""
import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from group_geometry.base import BaseGroupFamily, GroupElement
from group_geometry.scales import Scale
from helpers.constants import (
    CIRCLE_LENGTH_CHOICES, FAMILY_BUNCE_DEDDENS, FAMILY_FINITE, FAMILY_ROOTS_OF_UNITY,
)
from helpers.exceptions import BudgetExceededError


def validate_tower(alpha: Sequence[int]) -> Tuple[int, ...]:
    """Return (1, α_1, ..., α_K) after checking every ratio α_{n+1}/α_n is prime"""
    tower = (1,) + tuple(int(a) for a in alpha)
    if len(tower) < 2:
        raise ValueError("the tower needs at least one level")
    for lower, upper in zip(tower, tower[1:]):
        if upper % lower != 0 or not isprime(upper // lower):
            raise ValueError(f"tower ratio {upper}/{lower} is not a prime integer")
    return tower


class RootsOfUnityGroup(BaseGroupFamily):
    """ℤ(α) = ⋃ μ_{α_n}, optionally times ℤ (the Bunce-Deddens group)"""

    def __init__(self, alpha: Sequence[int], integer_factor: bool = True, circle_length: str = "arc"):
        if circle_length not in CIRCLE_LENGTH_CHOICES:
            raise ValueError(f"unknown circle length {circle_length!r}, expected one of {CIRCLE_LENGTH_CHOICES}")
        self.tower = validate_tower(alpha)
        self.integer_factor = bool(integer_factor)
        self.circle_length = circle_length
        self._identity = GroupElement(self.key, (0, 0, 0), self)

    @property
    def tag(self) -> str:
        return FAMILY_BUNCE_DEDDENS if self.integer_factor else FAMILY_ROOTS_OF_UNITY

    @property
    def key(self) -> str:
        suffix = "xZ" if self.integer_factor else ""
        return f"{self.tag}(alpha={','.join(str(a) for a in self.tower[1:])}){suffix}"

    @property
    def known_levels(self) -> int:
        return len(self.tower) - 1

    @property
    def levels_are_finite(self) -> bool:
        return not self.integer_factor

    def _check_level(self, level: int):
        if level > self.known_levels:
            raise BudgetExceededError(
                f"level {level} is past the known tower prefix of {self.key}",
                required=level, budget=self.known_levels,
            )

    def element(self, residue: int, level: int, z: int = 0) -> GroupElement:
        """ζ = exp(2πi residue/α_level), reduced to its minimal level"""
        self._check_level(level)
        if z and not self.integer_factor:
            raise ValueError(f"{self.key} has no integer factor")
        residue %= self.tower[level]
        while level > 0 and residue % (self.tower[level] // self.tower[level - 1]) == 0:
            residue //= self.tower[level] // self.tower[level - 1]
            level -= 1
        return GroupElement(self.key, (residue, level, int(z)), self)

    def root(self, g: GroupElement) -> complex:
        residue, level, _ = g.coords
        return complex(np.exp(2j * np.pi * residue / self.tower[level]))

    def turns(self, g: GroupElement) -> Fraction:
        """Angle of ζ in full turns, in [0, 1)"""
        residue, level, _ = g.coords
        return Fraction(residue, self.tower[level])

    def identity(self) -> GroupElement:
        return self._identity

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self.check_same_family(g, h)
        (r1, l1, z1), (r2, l2, z2) = g.coords, h.coords
        top = max(l1, l2)
        residue = r1 * (self.tower[top] // self.tower[l1]) + r2 * (self.tower[top] // self.tower[l2])
        return self.element(residue, top, z1 + z2)

    def inverse(self, g: GroupElement) -> GroupElement:
        residue, level, z = g.coords
        return self.element(-residue, level, -z)

    def level(self, g: GroupElement) -> int:
        return g.coords[1]

    def coordinates(self, g: GroupElement) -> list:
        residue, level, z = g.coords
        return [f"{residue}/{self.tower[level]}", z] if self.integer_factor else [f"{residue}/{self.tower[level]}"]

    def sort_key(self, g: GroupElement):
        residue, level, z = g.coords
        return (level, abs(z), z, Fraction(residue, self.tower[level]))

    def default_scale(self) -> Scale:
        return Scale.tower(self.tower, finite=self.top_level is not None)

    def h_selectors(self) -> Sequence[str]:
        return CIRCLE_LENGTH_CHOICES

    def _circle(self, turns: Fraction, selector: str) -> float:
        """Length of exp(2πi·turns) on the circle for the chosen selector"""
        distance = min(turns % 1, 1 - turns % 1)
        if selector == "arc":
            return float(2 * math.pi * distance)
        if selector == "chordal":
            return float(2 * math.sin(math.pi * distance))
        raise ValueError(f"unknown circle length {selector!r}")

    def h_length(self, g: GroupElement, selector: Optional[str] = None) -> float:
        return self._circle(self.turns(g), selector or self.circle_length) + abs(g.coords[2])

    def _z_bound(self, h_bound: float) -> int:
        return math.floor(h_bound) if self.integer_factor and math.isfinite(h_bound) else 0

    def candidate_count(self, max_level: int, h_bound: float) -> int:
        self._check_level(max_level)
        if self.integer_factor and not math.isfinite(h_bound):
            return math.inf
        return self.tower[max_level] * (2 * self._z_bound(h_bound) + 1)

    def candidates(self, max_level: int, h_bound: float) -> Iterator[GroupElement]:
        self._check_level(max_level)
        bound = self._z_bound(h_bound)
        for z in range(-bound, bound + 1):
            for residue in range(self.tower[max_level]):
                yield self.element(residue, max_level, z)

    def subgroup_distance(self, g: GroupElement, n: int, selector: Optional[str] = None) -> float:
        """Distance to the nearest element of μ_{α_n}×ℤ; the integer part is shared"""
        if self.level(g) <= n:
            return 0.0
        position = self.turns(g) * self.tower[n]
        offset = (position - round(position)) / self.tower[n]
        return self._circle(offset, selector or self.circle_length)

    def exact_hausdorff(self, n: int, selector: Optional[str] = None) -> Optional[float]:
        if (selector or self.circle_length) == "arc":
            if self.top_level is not None and n >= self.top_level:
                return 0.0
            return math.pi / self.tower[n]
        return None

    def random_element(self, rng: np.random.Generator, max_level: int, h_bound: float) -> GroupElement:
        level = min(int(rng.integers(0, max_level + 1)), self.known_levels)
        residue = int(rng.integers(0, self.tower[level]))
        bound = self._z_bound(h_bound)
        return self.element(residue, level, int(rng.integers(-bound, bound + 1)) if bound else 0)


class FiniteTowerGroup(RootsOfUnityGroup):
    """The finite group μ_{α_K} with the tower filtration; every ball is finite"""

    def __init__(self, alpha: Sequence[int], circle_length: str = "arc"):
        super().__init__(alpha, integer_factor=False, circle_length=circle_length)

    @property
    def tag(self) -> str:
        return FAMILY_FINITE

    @property
    def top_level(self) -> Optional[int]:
        return self.known_levels

    def __len__(self) -> int:
        return self.tower[-1]

    def elements(self) -> Iterator[GroupElement]:
        return self.candidates(self.known_levels, 0.0)
