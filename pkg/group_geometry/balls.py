"""
Closed balls of proper length functions, bounded doubling diagnostics and
Hausdorff distances between G_∞ and the subgroups G_n.
"""
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from group_geometry.base import GroupElement
from group_geometry.lengths import LengthFunction
from helpers.config import ConfigHelper
from helpers.exceptions import BudgetExceededError, ImproperLengthError
from helpers.logger import LoggerHelper

logger = LoggerHelper.get_logger(__name__, prefix='balls')

# Relative slack on ball membership so boundary points with float lengths stay inside
MEMBERSHIP_SLACK = 1e-12


@dataclass(frozen=True)
class Ball:
    """Closed ball {g : 𝕃(g) ≤ radius}, sorted by (level, coordinates)"""

    elements: tuple
    radius: float
    length: LengthFunction = field(compare=False)
    max_level: Optional[int] = None
    _index: Dict[GroupElement, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index.update({g: i for i, g in enumerate(self.elements)})

    @property
    def family(self) -> str:
        return self.length.group.key

    @property
    def group(self):
        return self.length.group

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in self._index

    def index(self, g: GroupElement) -> Optional[int]:
        return self._index.get(g)

    def restricted_to_level(self, n: int) -> "Ball":
        """The same ball intersected with G_n"""
        kept = tuple(g for g in self.elements if g.level <= n)
        return Ball(kept, self.radius, self.length, n)

    def rows(self) -> List[dict]:
        """Serialization rows: element-id, coordinates, 𝕃_H, 𝔽, 𝕃"""
        h_part, f_part = self.length.h_part, self.length.f_part
        return [
            {
                "element_id": i,
                "coordinates": g.to_list(),
                "length_h": h_part(g),
                "length_f": f_part(g),
                "length": self.length(g),
            }
            for i, g in enumerate(self.elements)
        ]


def _level_cap(length: LengthFunction, f_bound: float, max_level: Optional[int]) -> int:
    group = length.group
    if math.isfinite(f_bound):
        cap = max(0, length.f_part.scale.max_level_within(f_bound))
    elif group.top_level is not None:
        cap = group.top_level
    elif max_level is not None and group.levels_are_finite:
        cap = max_level
    else:
        raise ImproperLengthError(f"{length.describe()} is not proper on {group.key}")
    if group.top_level is not None:
        cap = min(cap, group.top_level)
    return cap if max_level is None else min(cap, max_level)


def enumerate_ball(length: LengthFunction, r: float, budget: Optional[int] = None,
                   max_level: Optional[int] = None) -> Ball:
    """
    Every g with 𝕃(g) ≤ r, optionally restricted to G_max_level.

    A superset lattice (levels up to scale⁻¹ of the 𝔽 bound, 𝕃_H up to its
    bound) is enumerated and filtered; the lattice size is checked against
    the budget first.
    """
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    group = length.group
    if not length.is_proper and max_level is None:
        raise ImproperLengthError(f"{length.describe()} has infinite balls on {group.key}")

    budget = budget if budget is not None else ConfigHelper().get_budget()
    h_bound, f_bound = length.bounds(r)
    cap = _level_cap(length, f_bound, max_level)
    if not math.isfinite(h_bound) and not group.levels_are_finite and group.top_level is None:
        raise ImproperLengthError(f"{length.describe()} leaves 𝕃_H unbounded on {group.key}")

    required = group.candidate_count(cap, h_bound)
    if required > budget:
        raise BudgetExceededError(
            f"ball of radius {r} needs {required} candidates, budget is {budget}",
            required=required, budget=budget,
        )

    started = time.perf_counter()
    threshold = r * (1 + MEMBERSHIP_SLACK)
    kept = [g for g in group.candidates(cap, h_bound) if length(g) <= threshold]
    kept.sort(key=lambda g: g.sort_key())
    logger.debug(
        f"Enumerated ball r={r} on {group.key}: {len(kept)} of {required} candidates",
        extra={"family": group.key, "radius": r, "level": cap,
               "elapsed_ms": round(1000 * (time.perf_counter() - started), 3)},
    )
    return Ball(tuple(kept), float(r), length, max_level)


@dataclass
class DoublingRow:
    radius: float
    outer: int
    inner: int
    ratio: float


@dataclass
class DoublingReport:
    theta: float
    rows: List[DoublingRow]
    bound: Optional[float] = None

    @property
    def max_ratio(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)

    @property
    def within_bound(self) -> Optional[bool]:
        if self.bound is None:
            return None
        return self.max_ratio <= self.bound

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "bound": self.bound,
            "max_ratio": self.max_ratio,
            "within_bound": self.within_bound,
            "rows": [row.__dict__ for row in self.rows],
        }


def doubling_report(length: LengthFunction, theta: float, radii: Sequence[float],
                    bound: Optional[float] = None, budget: Optional[int] = None) -> DoublingReport:
    """|B(θr)| / |B(r)| for every radius"""
    if theta <= 1:
        raise ValueError(f"theta must exceed 1, got {theta}")
    rows = []
    for r in radii:
        if r < 1:
            raise ValueError(f"doubling radii must be at least 1, got {r}")
        inner = len(enumerate_ball(length, r, budget))
        outer = len(enumerate_ball(length, theta * r, budget))
        rows.append(DoublingRow(float(r), outer, inner, outer / inner))
    report = DoublingReport(float(theta), rows, bound)
    logger.info(f"Doubling on {length.group.key}: max ratio {report.max_ratio:.6g} over {len(rows)} radii")
    return report


@dataclass
class HausdorffReport:
    level: int
    radius: float
    exact: Optional[float]
    enumerated: float
    window_size: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def hausdorff_subgroup_distance(length: LengthFunction, n: int, R: float,
                                budget: Optional[int] = None) -> HausdorffReport:
    """
    One-sided Hausdorff distance in 𝕃_H from the 𝕃-ball of radius R to G_n,
    next to the closed form for the whole of G_∞ when one is known.
    """
    window = enumerate_ball(length, R, budget)
    selector = length.h_part.selector
    group = length.group
    enumerated = max((group.subgroup_distance(g, n, selector) for g in window), default=0.0)
    return HausdorffReport(n, float(R), group.exact_hausdorff(n, selector), enumerated, len(window))
