"""
Base classes for the inductive-limit group families.

Every family is an increasing union of subgroups G_0 ⊆ G_1 ⊆ ... and
stores its elements exactly; lengths are only turned into floats at
evaluation time.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Sequence, Tuple

import numpy as np

from helpers.exceptions import FamilyMismatchError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='group-family')


@dataclass(frozen=True)
class GroupElement:
    """Immutable element of a group family, keyed by the family's parameter string"""

    family: str
    coords: Tuple[Any, ...]
    group: "BaseGroupFamily" = field(compare=False, hash=False, repr=False)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.group.inverse(self)

    @property
    def level(self) -> int:
        return self.group.level(self)

    @property
    def is_identity(self) -> bool:
        return self == self.group.identity()

    def sort_key(self):
        return self.group.sort_key(self)

    def to_list(self) -> list:
        """JSON-friendly coordinates"""
        return self.group.coordinates(self)


class BaseGroupFamily(ABC):
    """
    Abstract inductive-limit abelian group.

    Subclasses provide exact arithmetic, the filtration level, the length
    ingredients (𝕃_H, default scale for 𝔽) and the enumeration primitives
    used by ball construction.
    """

    tag: str = "abstract"

    @property
    @abstractmethod
    def key(self) -> str:
        """Parameter string identifying this family instance"""

    @abstractmethod
    def identity(self) -> GroupElement:
        pass

    @abstractmethod
    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        pass

    @abstractmethod
    def inverse(self, g: GroupElement) -> GroupElement:
        pass

    @abstractmethod
    def level(self, g: GroupElement) -> int:
        """Smallest n with g in G_n"""

    @abstractmethod
    def coordinates(self, g: GroupElement) -> list:
        pass

    @abstractmethod
    def sort_key(self, g: GroupElement):
        """Lexicographic key on (level, coordinates)"""

    @abstractmethod
    def default_scale(self):
        pass

    @abstractmethod
    def h_length(self, g: GroupElement, selector: str) -> float:
        """The 𝕃_H value of g for the given norm selector"""

    @abstractmethod
    def h_selectors(self) -> Sequence[str]:
        pass

    @abstractmethod
    def candidate_count(self, max_level: int, h_bound: float) -> int:
        """Size of the superset lattice enumerated for a ball"""

    @abstractmethod
    def candidates(self, max_level: int, h_bound: float) -> Iterator[GroupElement]:
        """Every element of level ≤ max_level whose 𝕃_H is plausibly ≤ h_bound"""

    @abstractmethod
    def subgroup_distance(self, g: GroupElement, n: int, selector: str) -> float:
        """𝕃_H-distance from g to the subgroup G_n"""

    @abstractmethod
    def exact_hausdorff(self, n: int, selector: str) -> Optional[float]:
        """Closed-form one-sided Hausdorff distance from G_∞ to G_n, when known"""

    @abstractmethod
    def random_element(self, rng: np.random.Generator, max_level: int, h_bound: float) -> GroupElement:
        pass

    @property
    def top_level(self) -> Optional[int]:
        """Largest level for finite families, None when the filtration is infinite"""
        return None

    @property
    def levels_are_finite(self) -> bool:
        """True when every G_n is a finite group"""
        return False

    def check_same_family(self, *elements: GroupElement):
        for element in elements:
            if element.family != self.key:
                raise FamilyMismatchError(f"element of {element.family} used with {self.key}")

    def __repr__(self) -> str:
        return self.key
