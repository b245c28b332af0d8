"""Game instances, transfers and the budget-plane partition.

The adversary's budget is normalized to 1 and never stored.

Sign conventions
----------------
``tau_v > 0`` moves battlefield valuation from Player 1 to Player 2.
``tau_b > 0`` moves budget from Player 2 to Player 1, so a transfer written
as "budget from 1 to 2" in the other orientation is ``-tau_b``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from enum import Enum


class ModelError(ValueError):
    """Base class for invalid inputs."""


class NonPositiveParameter(ModelError):
    def __init__(self, field: str, value: float):
        super().__init__(f"{field} must be > 0 (got {value!r})")
        self.field = field
        self.value = value


class NonFinite(ModelError):
    def __init__(self, field: str, value: float):
        super().__init__(f"{field} must be finite (got {value!r})")
        self.field = field
        self.value = value


class TransferOutOfRange(ModelError):
    def __init__(self, component: str, bound: str, value: float, limit: float):
        super().__init__(
            f"{component}={value!r} violates the {bound} bound {limit!r} "
            "(the transfer domain is an open interval)"
        )
        self.component = component
        self.bound = bound
        self.value = value
        self.limit = limit


class CaseLabel(str, Enum):
    """Adversary best-response regime.

    ``a`` labels: Player 1 is the relatively weaker side
    (phi1/phi2 >= x1/x2); ``b`` labels are the mirror image.  Case 3 and
    Case 4 carry no side because their formulas are symmetric.
    """

    C1a = "C1a"
    C2a = "C2a"
    C3 = "C3"
    C4 = "C4"
    C1b = "C1b"
    C2b = "C2b"

    def __str__(self) -> str:
        return self.value


class BudgetRegion(str, Enum):
    A1 = "A1"  # x1 >= 1, x2 >= 1
    A2 = "A2"  # x1 >= 1, x2 < 1
    A3 = "A3"  # x1 < 1, x2 >= 1
    A4 = "A4"  # x1 < 1, x2 < 1, x1 + x2 >= 1
    A5 = "A5"  # x1 + x2 < 1

    def __str__(self) -> str:
        return self.value


GAME_FIELDS = ("phi1", "phi2", "x1", "x2")


@dataclass(frozen=True)
class GameInstance:
    """Total front valuations and player budgets (adversary budget is 1)."""

    phi1: float
    phi2: float
    x1: float
    x2: float

    def __post_init__(self):
        validate(self)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi1, self.phi2, self.x1, self.x2)

    def swapped(self) -> "GameInstance":
        """The same game with the two players relabelled."""
        return GameInstance(self.phi2, self.phi1, self.x2, self.x1)


@dataclass(frozen=True)
class TransferPair:
    tau_v: float = 0.0
    tau_b: float = 0.0


@dataclass(frozen=True)
class PostTransferGame:
    phi1_bar: float
    phi2_bar: float
    x1_bar: float
    x2_bar: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi1_bar, self.phi2_bar, self.x1_bar, self.x2_bar)

    @classmethod
    def from_game(cls, g: GameInstance) -> "PostTransferGame":
        return cls(g.phi1, g.phi2, g.x1, g.x2)


def validate(g) -> None:
    """Raise unless every field is finite and strictly positive."""
    for name in GAME_FIELDS:
        value = getattr(g, name)
        if not isinstance(value, numbers.Real) or isinstance(value, bool):
            raise NonFinite(name, value)
        if not math.isfinite(value):
            raise NonFinite(name, value)
        if value <= 0:
            raise NonPositiveParameter(name, value)


def apply_transfer(g: GameInstance, t: TransferPair) -> PostTransferGame:
    if not (math.isfinite(t.tau_v) and math.isfinite(t.tau_b)):
        raise TransferOutOfRange("tau_v" if not math.isfinite(t.tau_v) else "tau_b",
                                 "finite", t.tau_v, math.inf)
    if t.tau_v <= -g.phi2:
        raise TransferOutOfRange("tau_v", "lower", t.tau_v, -g.phi2)
    if t.tau_v >= g.phi1:
        raise TransferOutOfRange("tau_v", "upper", t.tau_v, g.phi1)
    if t.tau_b <= -g.x1:
        raise TransferOutOfRange("tau_b", "lower", t.tau_b, -g.x1)
    if t.tau_b >= g.x2:
        raise TransferOutOfRange("tau_b", "upper", t.tau_b, g.x2)
    return PostTransferGame(
        g.phi1 - t.tau_v,
        g.phi2 + t.tau_v,
        g.x1 + t.tau_b,
        g.x2 - t.tau_b,
    )


def is_canonical(phi1: float, phi2: float, x1: float, x2: float) -> bool:
    """True when Player 1 is the relatively weaker side (phi1/phi2 >= x1/x2)."""
    return phi1 * x2 >= phi2 * x1


def canonicalize(g: GameInstance) -> tuple[GameInstance, bool]:
    if is_canonical(*g.as_tuple()):
        return g, False
    return g.swapped(), True


def budget_region(g: GameInstance) -> BudgetRegion:
    x1, x2 = g.x1, g.x2
    if x1 + x2 < 1:
        return BudgetRegion.A5
    if x1 >= 1 and x2 >= 1:
        return BudgetRegion.A1
    if x1 >= 1:
        return BudgetRegion.A2
    if x2 >= 1:
        return BudgetRegion.A3
    return BudgetRegion.A4
