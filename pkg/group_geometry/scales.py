"""
Scale maps ℕ → [0, ∞) used by the level length 𝔽.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from helpers.exceptions import BudgetExceededError


@dataclass(frozen=True)
class Scale:
    """
    Strictly increasing unbounded scale.

    A tower scale only knows a finite prefix of its values; asking for
    levels past the prefix raises unless the family is finite.
    """

    name: str
    evaluator: Callable[[int], float] = field(compare=False)
    known_levels: Optional[int] = None
    finite: bool = False

    @classmethod
    def geometric(cls, p: int) -> "Scale":
        return cls(name=f"geometric({p})", evaluator=lambda n: float(p ** n))

    @classmethod
    def tower(cls, values: Tuple[int, ...], finite: bool = False) -> "Scale":
        """values = (α_0, α_1, ..., α_K) with α_0 = 1"""
        frozen = tuple(values)
        return cls(
            name=f"tower{frozen[1:]}",
            evaluator=lambda n: float(frozen[n]),
            known_levels=len(frozen) - 1,
            finite=finite,
        )

    @classmethod
    def custom(cls, name: str, evaluator: Callable[[int], float], check_levels: int = 64) -> "Scale":
        values = [float(evaluator(n)) for n in range(check_levels)]
        if values[0] < 0 or any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"scale {name} is not strictly increasing and nonnegative")
        return cls(name=name, evaluator=evaluator)

    def __call__(self, n: int) -> float:
        if self.known_levels is not None and n > self.known_levels:
            raise BudgetExceededError(
                f"scale {self.name} only knows levels up to {self.known_levels}",
                required=n, budget=self.known_levels,
            )
        return self.evaluator(n)

    def max_level_within(self, r: float) -> int:
        """
        Largest n with scale(n) ≤ r, or -1 when even scale(0) exceeds r.

        For tower scales the next unknown value is at least twice the last
        known one; radii reaching it cannot be answered from the prefix.
        """
        if r < self.evaluator(0):
            return -1
        n = 0
        while True:
            if self.known_levels is not None and n == self.known_levels:
                if not self.finite and r >= 2 * self.evaluator(n):
                    raise BudgetExceededError(
                        f"radius {r} reaches past the known tower prefix of {self.name}",
                        required=n + 1, budget=self.known_levels,
                    )
                return n
            if self.evaluator(n + 1) > r:
                return n
            n += 1
