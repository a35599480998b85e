"""
Normalized 2-cocycles σ: G×G → 𝕋 with presets for the solenoid and
Bunce-Deddens groups.
"""
import cmath
import math
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from group_geometry.base import BaseGroupFamily, GroupElement
from group_geometry.roots_of_unity import RootsOfUnityGroup
from group_geometry.solenoid import SolenoidGroup
from helpers.exceptions import CocycleError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='cocycles')

CocycleFn = Callable[[GroupElement, GroupElement], complex]


def unit_phase(turns: Fraction) -> complex:
    """exp(2πi·turns), reducing the rational angle mod 1 first"""
    return cmath.exp(2j * math.pi * float(turns % 1))


class Cocycle:
    """A validated 2-cocycle on one group family"""

    def __init__(self, group: BaseGroupFamily, name: str, evaluator: CocycleFn,
                 validate: bool = True, checks: int = 1000, seed: int = 0, tolerance: float = 1e-12):
        self.group = group
        self.name = name
        self._evaluator = evaluator
        if validate:
            self.validate(checks=checks, seed=seed, tolerance=tolerance)

    def __call__(self, g: GroupElement, h: GroupElement) -> complex:
        return self._evaluator(g, h)

    def __repr__(self) -> str:
        return f"Cocycle({self.name} on {self.group.key})"

    @property
    def is_trivial(self) -> bool:
        return self.name == "trivial"

    def _sample(self, rng: np.random.Generator) -> GroupElement:
        if isinstance(self.group, RootsOfUnityGroup):
            return self.group.random_element(rng, self.group.known_levels, 5.0)
        return self.group.random_element(rng, 3, 4.0)

    def validate(self, checks: int = 1000, seed: int = 0, tolerance: float = 1e-12) -> int:
        """
        Check σ(g,h)σ(gh,k) = σ(g,hk)σ(h,k), |σ| = 1 and σ(g,1) = σ(1,g) = 1
        on random triples; returns the number of triples checked.
        """
        rng = np.random.default_rng(seed)
        one = self.group.identity()
        for _ in range(checks):
            g, h, k = self._sample(rng), self._sample(rng), self._sample(rng)
            left = self(g, h) * self(g * h, k)
            right = self(g, h * k) * self(h, k)
            if abs(left - right) > tolerance:
                raise CocycleError(f"{self.name} fails the cocycle identity at {g}, {h}, {k}")
            if abs(abs(self(g, h)) - 1) > tolerance:
                raise CocycleError(f"{self.name} is not unimodular at {g}, {h}")
            if abs(self(g, one) - 1) > tolerance or abs(self(one, g) - 1) > tolerance:
                raise CocycleError(f"{self.name} is not normalized at {g}")
        logger.debug(f"Validated cocycle {self.name} on {checks} random triples")
        return checks

    def twisted_by(self, f: Callable[[GroupElement], complex], name: Optional[str] = None) -> "Cocycle":
        """The cohomologous cocycle σ′(g,h) = f(g)f(h)/f(gh)·σ(g,h)"""
        if abs(f(self.group.identity()) - 1) > 1e-12:
            raise CocycleError("the coboundary function must equal 1 at the identity")

        def twisted(g: GroupElement, h: GroupElement) -> complex:
            return f(g) * f(h) / f(g * h) * self(g, h)

        return Cocycle(self.group, name or f"{self.name}~", twisted)

    @classmethod
    def trivial(cls, group: BaseGroupFamily) -> "Cocycle":
        return cls(group, "trivial", lambda g, h: 1.0 + 0.0j, validate=False)

    @classmethod
    def skew(cls, group: SolenoidGroup, theta: Sequence[Sequence]) -> "Cocycle":
        """Bicharacter exp(2πi xᵀΘy) for an antisymmetric rational matrix Θ"""
        matrix = [[Fraction(str(v)) if isinstance(v, float) else Fraction(v) for v in row] for row in theta]
        if len(matrix) != group.d or any(len(row) != group.d for row in matrix):
            raise CocycleError(f"Θ must be {group.d}×{group.d}")
        for i in range(group.d):
            for j in range(group.d):
                if matrix[i][j] != -matrix[j][i]:
                    raise CocycleError("Θ must be antisymmetric so that σ(g, -g) = 1")

        def bicharacter(g: GroupElement, h: GroupElement) -> complex:
            x, y = group.fractions(g), group.fractions(h)
            turns = sum(x[i] * matrix[i][j] * y[j] for i in range(group.d) for j in range(group.d))
            return unit_phase(Fraction(turns))

        return cls(group, "skew", bicharacter)

    @classmethod
    def bunce_deddens(cls, group: RootsOfUnityGroup) -> "Cocycle":
        """σ((ζ,z),(η,y)) = η^z"""

        def evaluator(g: GroupElement, h: GroupElement) -> complex:
            z = g.coords[2]
            residue, level, _ = h.coords
            return unit_phase(Fraction(residue * z % group.tower[level], group.tower[level]))

        return cls(group, "bunce_deddens", evaluator)

    @classmethod
    def custom(cls, group: BaseGroupFamily, name: str, evaluator: CocycleFn, seed: int = 0) -> "Cocycle":
        return cls(group, name, evaluator, seed=seed)

    @classmethod
    def by_name(cls, group: BaseGroupFamily, name: str, theta=None) -> "Cocycle":
        if name == "trivial":
            return cls.trivial(group)
        if name == "skew":
            if not isinstance(group, SolenoidGroup):
                raise CocycleError("the skew cocycle is defined on solenoid groups")
            return cls.skew(group, theta if theta is not None else [[0] * group.d for _ in range(group.d)])
        if name == "bunce_deddens":
            if not isinstance(group, RootsOfUnityGroup):
                raise CocycleError("the Bunce-Deddens cocycle needs a roots-of-unity group")
            return cls.bunce_deddens(group)
        raise CocycleError(f"unknown cocycle {name!r}")
