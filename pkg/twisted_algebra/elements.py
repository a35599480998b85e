"""
Finitely supported elements of the twisted group algebra C_c(G, σ).
"""
from typing import Dict, Iterator, Mapping, Optional, Tuple

import numpy as np

from group_geometry.base import BaseGroupFamily, GroupElement
from group_geometry.roots_of_unity import RootsOfUnityGroup
from group_geometry.solenoid import SolenoidGroup
from helpers.exceptions import FamilyMismatchError
from twisted_algebra.cocycles import Cocycle


class AlgebraElement:
    """
    Map G → ℂ with finite support.

    Iteration yields (group element, coefficient) pairs in the canonical
    (level, coordinates) order so matrix assembly is deterministic.
    """

    def __init__(self, group: BaseGroupFamily, coefficients: Optional[Mapping[GroupElement, complex]] = None):
        self.group = group
        self._vec: Dict[GroupElement, complex] = {}
        for g, value in (coefficients or {}).items():
            group.check_same_family(g)
            value = complex(value)
            if value != 0:
                self._vec[g] = self._vec.get(g, 0) + value

    @classmethod
    def zero(cls, group: BaseGroupFamily) -> "AlgebraElement":
        return cls(group)

    @classmethod
    def delta(cls, g: GroupElement, coefficient: complex = 1.0) -> "AlgebraElement":
        return cls(g.group, {g: coefficient})

    @classmethod
    def from_mapping(cls, group: BaseGroupFamily, mapping: Mapping[GroupElement, complex]) -> "AlgebraElement":
        return cls(group, mapping)

    @classmethod
    def random(cls, group: BaseGroupFamily, rng: np.random.Generator, size: int, max_level: int,
               h_bound: float, real: bool = False) -> "AlgebraElement":
        """Random coefficients on `size` random elements of level ≤ max_level"""
        coefficients = {}
        for _ in range(size):
            g = group.random_element(rng, max_level, h_bound)
            value = complex(rng.normal(), 0.0 if real else rng.normal())
            coefficients[g] = coefficients.get(g, 0) + value
        return cls(group, coefficients)

    @property
    def support(self) -> Tuple[GroupElement, ...]:
        return tuple(sorted(self._vec, key=lambda g: g.sort_key()))

    def __iter__(self) -> Iterator[Tuple[GroupElement, complex]]:
        return ((g, self._vec[g]) for g in self.support)

    def __getitem__(self, g: GroupElement) -> complex:
        return self._vec.get(g, 0j)

    def __len__(self) -> int:
        return len(self._vec)

    def __bool__(self) -> bool:
        return bool(self._vec)

    def _check(self, other: "AlgebraElement"):
        if other.group.key != self.group.key:
            raise FamilyMismatchError(f"cannot combine elements of {self.group.key} and {other.group.key}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        merged = dict(self._vec)
        for g, value in other._vec.items():
            merged[g] = merged.get(g, 0) + value
        return AlgebraElement(self.group, merged)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.group, {g: -v for g, v in self._vec.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "AlgebraElement":
        if isinstance(scalar, AlgebraElement):
            return NotImplemented
        return AlgebraElement(self.group, {g: scalar * v for g, v in self._vec.items()})

    __rmul__ = __mul__

    def equals(self, other: "AlgebraElement", tolerance: float = 0.0) -> bool:
        return (self - other).sup_norm() <= tolerance

    def l1_norm(self) -> float:
        return float(sum(abs(v) for v in self._vec.values()))

    def sup_norm(self) -> float:
        return float(max((abs(v) for v in self._vec.values()), default=0.0))

    def max_level(self) -> int:
        return max((g.level for g in self._vec), default=0)

    def trace_zero(self) -> "AlgebraElement":
        """The element with its identity coefficient removed"""
        one = self.group.identity()
        return AlgebraElement(self.group, {g: v for g, v in self._vec.items() if g != one})

    def involution(self, cocycle: Cocycle) -> "AlgebraElement":
        return involution(self, cocycle)

    def symmetrized(self, cocycle: Cocycle) -> "AlgebraElement":
        """(f + f*)/2, the self-adjoint part"""
        return 0.5 * (self + involution(self, cocycle))

    def is_self_adjoint(self, cocycle: Cocycle, tolerance: float = 1e-12) -> bool:
        return self.equals(involution(self, cocycle), tolerance)

    def to_list(self) -> list:
        """JSON-friendly (element, re, im) triples"""
        return [[g.to_list(), value.real, value.imag] for g, value in self]

    def __repr__(self) -> str:
        return f"AlgebraElement({len(self)} terms on {self.group.key})"


def twisted_convolution(f1: AlgebraElement, f2: AlgebraElement, cocycle: Cocycle) -> AlgebraElement:
    """(f1 ∗ f2)(x) = Σ_{gh=x} f1(g) f2(h) σ(g,h)"""
    f1._check(f2)
    result: Dict[GroupElement, complex] = {}
    for g, a in f1:
        for h, b in f2:
            gh = g * h
            result[gh] = result.get(gh, 0) + a * b * cocycle(g, h)
    return AlgebraElement(f1.group, result)


def involution(f: AlgebraElement, cocycle: Cocycle) -> AlgebraElement:
    """f*(g) = conj(σ(g,g⁻¹))·conj(f(g⁻¹)), so that λ(f*) = λ(f)*"""
    result = {}
    for g, value in f:
        inverse = g.inverse()
        result[inverse] = np.conj(cocycle(inverse, g)) * np.conj(value)
    return AlgebraElement(f.group, result)


def trace(f: AlgebraElement) -> complex:
    """The canonical trace f ↦ f(identity)"""
    return f[f.group.identity()]


def fejer_coefficient(g: GroupElement, k: int, width: Optional[float] = None) -> float:
    """
    Positive-definite kernel value ĉ_k(g) ∈ [0, 1]: the indicator of G_k
    times a triangle (1 − |x|/w)⁺ in each real direction of the group.
    """
    if k < 1:
        raise ValueError(f"Fejér level must be at least 1, got {k}")
    if g.level > k:
        return 0.0
    width = float(width if width is not None else k)
    group = g.group
    coefficient = 1.0
    if isinstance(group, SolenoidGroup):
        for x in group.fractions(g):
            coefficient *= max(0.0, 1.0 - abs(float(x)) / width)
    elif isinstance(group, RootsOfUnityGroup):
        coefficient *= max(0.0, 1.0 - abs(g.coords[2]) / width)
    return coefficient


def fejer_average(f: AlgebraElement, k: int, width: Optional[float] = None) -> AlgebraElement:
    """β^{φ_k}(f): pointwise multiplication by the Fejér coefficients"""
    return AlgebraElement(f.group, {g: fejer_coefficient(g, k, width) * v for g, v in f})
