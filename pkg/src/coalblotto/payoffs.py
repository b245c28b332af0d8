"""Equilibrium payoffs after a transfer, payoff changes, and their derivatives.

Derivatives are always taken at the origin of the transfer plane.  For a
general base point, apply the transfer first and differentiate the
resulting game at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import adversary
from ._front import front_payoff, front_payoff_array  # noqa: F401  (re-exported)
from .model import (
    CaseLabel,
    GameInstance,
    PostTransferGame,
    TransferPair,
    apply_transfer,
    is_canonical,
)

ZERO = TransferPair(0.0, 0.0)


class OnCaseBoundary(ValueError):
    """The payoff is not differentiable here (case boundary or Case 4)."""


class StepTooLarge(ValueError):
    """A finite-difference probe left the regime of the base point."""


@dataclass(frozen=True)
class PayoffPair:
    u1: float
    u2: float


@dataclass(frozen=True)
class Gradient2:
    """Partial derivatives with respect to (tau_b, tau_v)."""

    d_b: float
    d_v: float

    def __neg__(self) -> "Gradient2":
        return Gradient2(-self.d_b, -self.d_v)

    def dot(self, direction: tuple[float, float]) -> float:
        return self.d_b * direction[0] + self.d_v * direction[1]


def post_payoffs(p: PostTransferGame) -> PayoffPair:
    a = adversary.adversary_allocation(p)
    return PayoffPair(
        front_payoff(p.phi1_bar, p.x1_bar, a.xa1),
        front_payoff(p.phi2_bar, p.x2_bar, a.xa2),
    )


def player_payoffs(g: GameInstance, t: TransferPair = ZERO) -> PayoffPair:
    return post_payoffs(apply_transfer(g, t))


def payoff_deltas(g: GameInstance, t: TransferPair) -> tuple[float, float]:
    """Change of each player's payoff relative to no transfer."""
    base = player_payoffs(g)
    new = player_payoffs(g, t)
    return new.u1 - base.u1, new.u2 - base.u2


def is_mutually_beneficial(g: GameInstance, t: TransferPair, eps: float = 0.0) -> bool:
    d1, d2 = payoff_deltas(g, t)
    return d1 > eps and d2 > eps


# ---------------------------------------------------------------------------
# Closed-form gradients at tau = 0 for canonical games.


def _canonical_case(g: GameInstance, tol: float) -> tuple[CaseLabel, bool, GameInstance]:
    p = PostTransferGame.from_game(g)
    if adversary.case_slack(p) <= tol:
        raise OnCaseBoundary(f"{g} lies on a case boundary")
    label = adversary.classify_case(p)
    swapped = not is_canonical(*g.as_tuple())
    return label, swapped, g.swapped() if swapped else g


def _gradients_canonical(label: CaseLabel, g: GameInstance) -> tuple[Gradient2, Gradient2]:
    phi1, phi2, x1, x2 = g.as_tuple()
    if label in (CaseLabel.C1a, CaseLabel.C1b):
        # adversary all-in on front 1; front 2 is uncontested
        if x1 <= 1:
            g1 = Gradient2(phi1 / 2, -x1 / 2)
        else:
            g1 = Gradient2(phi1 / (2 * x1**2), 1 / (2 * x1) - 1)
        return g1, Gradient2(0.0, 1.0)
    if label in (CaseLabel.C2a, CaseLabel.C2b):
        shared_b = math.sqrt(phi1 * phi2) * (x1 + x2) / (4 * x2**1.5 * math.sqrt(x1))
        shared_v = 0.25 * (phi1 - phi2) * math.sqrt(x1 / (x2 * phi1 * phi2))
        return (
            Gradient2(shared_b, shared_v),
            Gradient2(-phi2 / (2 * x2**2) + shared_b, 1 - 1 / (2 * x2) + shared_v),
        )
    if label is CaseLabel.C3:
        cross_b = 0.25 * math.sqrt(phi1 * phi2 / (x1 * x2)) * (x2 - x1)
        cross_v = 0.25 * math.sqrt(x1 * x2 / (phi1 * phi2)) * (phi1 - phi2)
        return (
            Gradient2(phi1 / 2 + cross_b, -x1 / 2 + cross_v),
            Gradient2(-phi2 / 2 + cross_b, x2 / 2 + cross_v),
        )
    raise OnCaseBoundary(f"no smooth payoff in {label}")


def joint_gradients(g: GameInstance, tol: float = 0.0) -> tuple[Gradient2, Gradient2]:
    """Gradients of (u1, u2) at tau = 0 in the (tau_b, tau_v) plane.

    ``tau_b > 0`` is budget flowing from Player 2 to Player 1.  Mirrored
    games are evaluated in canonical form; relabelling the players negates
    both transfer axes, so the gradients swap roles and change sign.
    """
    label, swapped, canon = _canonical_case(g, tol)
    g1, g2 = _gradients_canonical(label, canon)
    if swapped:
        return -g2, -g1
    return g1, g2


def valuation_derivatives(g: GameInstance, tol: float = 0.0) -> tuple[float, float]:
    """d u_i / d tau_v at zero for a valuation-only transfer."""
    g1, g2 = joint_gradients(g, tol)
    return g1.d_v, g2.d_v


def _regime(p: PostTransferGame) -> tuple:
    a = adversary.adversary_allocation(p)
    return (adversary.classify_case(p), p.x1_bar <= a.xa1, p.x2_bar <= a.xa2)


def fd_gradient(g: GameInstance, h: float = 1e-5) -> tuple[Gradient2, Gradient2]:
    """Central differences of both payoffs in tau_b and tau_v."""
    base = _regime(PostTransferGame.from_game(g))
    if base[0] is CaseLabel.C4:
        raise OnCaseBoundary("Case 4 has no smooth neighbourhood")
    probes = {}
    for name, t in (
        ("b+", TransferPair(0.0, h)),
        ("b-", TransferPair(0.0, -h)),
        ("v+", TransferPair(h, 0.0)),
        ("v-", TransferPair(-h, 0.0)),
    ):
        p = apply_transfer(g, t)
        if _regime(p) != base:
            raise StepTooLarge(f"probe {name} with h={h} crosses out of {base[0]}")
        probes[name] = post_payoffs(p)
    g1 = Gradient2(
        (probes["b+"].u1 - probes["b-"].u1) / (2 * h),
        (probes["v+"].u1 - probes["v-"].u1) / (2 * h),
    )
    g2 = Gradient2(
        (probes["b+"].u2 - probes["b-"].u2) / (2 * h),
        (probes["v+"].u2 - probes["v-"].u2) / (2 * h),
    )
    return g1, g2
