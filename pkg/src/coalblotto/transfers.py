"""Existence of mutually beneficial transfers.

Valuation transfers are decided in closed form.  In the canonical
orientation (Player 1 relatively weaker) the valuation ratio
``(phi1 - tau) / (phi2 + tau)`` falls monotonically in ``tau``, so the
adversary regimes are visited in the fixed order

    C1a -> C2a -> C3 -> C2b -> C1b

and each regime occupies an interval of ``tau`` bounded by explicit
thresholds.  Inside a regime both payoffs are concave in ``tau``; the set
where a payoff beats its no-transfer value is an interval whose ends are
roots of a quadratic (obtained by isolating the square root and squaring).
A certificate is the intersection of the regime interval with the two
break-even intervals.

Budget transfers are decided by grid search; joint transfers by the
first-order argument on the payoff gradients at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from . import adversary
from .model import (
    BudgetRegion,
    CaseLabel,
    GameInstance,
    PostTransferGame,
    TransferPair,
    budget_region,
    canonicalize,
)
from .payoffs import OnCaseBoundary, joint_gradients, payoff_deltas, player_payoffs

C1a, C2a, C3, C4, C1b, C2b = (
    CaseLabel.C1a,
    CaseLabel.C2a,
    CaseLabel.C3,
    CaseLabel.C4,
    CaseLabel.C1b,
    CaseLabel.C2b,
)
A1, A2, A3, A4, A5 = (BudgetRegion.A1, BudgetRegion.A2, BudgetRegion.A3, BudgetRegion.A4, BudgetRegion.A5)


class DegenerateAllZero(ValueError):
    pass


class NotInGv(ValueError):
    pass


class NoDirection(RuntimeError):
    """The two payoff gradients are opposed or vanish; no first-order direction."""


# ---------------------------------------------------------------------------
# Quadratics


@dataclass(frozen=True)
class QuadraticRoots:
    a: float
    b: float
    c: float
    kind: str  # "two", "double" or "none"
    roots: tuple[float, ...] = ()

    @property
    def z_minus(self) -> float:
        return self.roots[0]

    @property
    def z_plus(self) -> float:
        return self.roots[-1]


def quadratic_roots(a: float, b: float, c: float) -> QuadraticRoots:
    """Real roots of ``a z**2 + b z + c``, smallest first.

    Uses the cancellation-free form ``q = -(b + sign(b) sqrt(disc)) / 2``.
    ``a == 0`` falls back to the linear root, reported as a double root.
    """
    if a == 0 and b == 0:
        if c == 0:
            raise DegenerateAllZero("all coefficients are zero")
        return QuadraticRoots(a, b, c, "none")
    if a == 0:
        return QuadraticRoots(a, b, c, "double", (-c / b,))
    disc = b * b - 4 * a * c
    if abs(disc) <= 1e-12 * max(b * b, abs(4 * a * c)):
        return QuadraticRoots(a, b, c, "double", (-b / (2 * a),))
    if disc < 0:
        return QuadraticRoots(a, b, c, "none")
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / a
    r2 = c / q if q != 0 else -r1
    lo, hi = min(r1, r2), max(r1, r2)
    return QuadraticRoots(a, b, c, "two", (lo, hi))


# ---------------------------------------------------------------------------
# Regime thresholds along a valuation transfer (canonical game)


@dataclass(frozen=True)
class Thresholds:
    """Transfers at which the adversary changes regime (canonical game).

    ``case1_exit``: C1a ends, ``(x1 x2 phi1 - phi2) / (1 + x1 x2)``.
    ``split_a``: C2a gives way to C3 (only when ``x2 < 1``).
    ``ab_line``: the ratio line, ``(phi1 x2 - phi2 x1) / (x1 + x2)``.
    ``split_b``: C3 gives way to C2b (only when ``x1 < 1``).
    ``case1b_entry``: C2b ends, ``(phi1 - x1 x2 phi2) / (1 + x1 x2)``.
    """

    case1_exit: float
    split_a: float
    ab_line: float
    split_b: float
    case1b_entry: float


def thresholds(g: GameInstance) -> Thresholds:
    phi1, phi2, x1, x2 = g.as_tuple()
    k = x1 * x2
    case1_exit = (k * phi1 - phi2) / (1 + k)
    ab_line = (phi1 * x2 - phi2 * x1) / (x1 + x2)
    case1b_entry = (phi1 - k * phi2) / (1 + k)
    if x2 < 1:
        w = (1 - x2) ** 2
        split_a = (k * phi1 - w * phi2) / (k + w)
    else:
        split_a = math.inf
    if x1 < 1:
        w = (1 - x1) ** 2
        split_b = (w * phi1 - k * phi2) / (w + k)
    else:
        split_b = -math.inf
    return Thresholds(case1_exit, split_a, ab_line, split_b, case1b_entry)


def case_interval(g: GameInstance, label: CaseLabel) -> tuple[float, float]:
    """Transfers ``tau`` (inside ``(-phi2, phi1)``) that put ``g`` in ``label``.

    Returned as ``(lo, hi)``; empty when ``lo >= hi``.  Endpoint openness
    is immaterial for the open certificate intervals built from it.
    """
    t = thresholds(g)
    lo_dom, hi_dom = -g.phi2, g.phi1
    if label is C1a:
        lo, hi = lo_dom, min(t.case1_exit, t.ab_line)
    elif label is C2a:
        lo, hi = t.case1_exit, min(t.split_a, t.ab_line)
    elif label is C3:
        lo, hi = t.split_a, t.split_b
    elif label is C2b:
        lo, hi = max(t.split_b, t.ab_line), t.case1b_entry
    elif label is C1b:
        lo, hi = max(t.case1b_entry, t.ab_line), hi_dom
    else:
        return t.ab_line, t.ab_line
    return max(lo, lo_dom), min(hi, hi_dom)


# ---------------------------------------------------------------------------
# Regime-local payoffs and break-even quadratics (canonical game)


def local_payoffs(label: CaseLabel, g: GameInstance, tau: float) -> tuple[float, float]:
    """Both payoffs after valuation transfer ``tau`` assuming regime ``label``."""
    phi1, phi2, x1, x2 = g.as_tuple()
    p1, p2 = phi1 - tau, phi2 + tau
    if label is C1a:
        c1 = x1 / 2 if x1 <= 1 else 1 - 1 / (2 * x1)
        return c1 * p1, p2
    if label is C1b:
        c2 = x2 / 2 if x2 <= 1 else 1 - 1 / (2 * x2)
        return p1, c2 * p2
    if label is C2a:
        s = 0.5 * math.sqrt(x1 * p1 * p2 / x2)
        return s, p2 * (1 - 1 / (2 * x2)) + s
    if label is C2b:
        s = 0.5 * math.sqrt(x2 * p1 * p2 / x1)
        return p1 * (1 - 1 / (2 * x1)) + s, s
    if label is C3:
        r = math.sqrt(x1 * x2 * p1 * p2)
        return 0.5 * (p1 * x1 + r), 0.5 * (p2 * x2 + r)
    raise ValueError(f"no regime-local payoff for {label}")


def breakeven_quadratic(
    label: CaseLabel, player: int, g: GameInstance, baseline: float
) -> QuadraticRoots:
    """Quadratic in ``tau`` whose roots contain the points where player's
    regime-local payoff equals ``baseline``.

    The square-root terms are isolated before squaring, so the roots may
    include spurious solutions; callers confirm signs on the actual payoffs.
    """
    phi1, phi2, x1, x2 = g.as_tuple()
    dphi = phi1 - phi2
    prod = phi1 * phi2
    if label is C1a:
        if player == 1:
            c1 = x1 / 2 if x1 <= 1 else 1 - 1 / (2 * x1)
            return quadratic_roots(0.0, -c1, c1 * phi1 - baseline)
        return quadratic_roots(0.0, 1.0, phi2 - baseline)
    if label is C1b:
        if player == 1:
            return quadratic_roots(0.0, -1.0, phi1 - baseline)
        c2 = x2 / 2 if x2 <= 1 else 1 - 1 / (2 * x2)
        return quadratic_roots(0.0, c2, c2 * phi2 - baseline)
    if label is C2a:
        k = x1 / x2
        if player == 1:
            return quadratic_roots(k, -k * dphi, 4 * baseline**2 - k * prod)
        d2 = 1 - 1 / (2 * x2)
        m = baseline - d2 * phi2
        return quadratic_roots(k + 4 * d2**2, -(k * dphi + 8 * m * d2), 4 * m**2 - k * prod)
    if label is C2b:
        k = x2 / x1
        if player == 2:
            return quadratic_roots(k, -k * dphi, 4 * baseline**2 - k * prod)
        d1 = 1 - 1 / (2 * x1)
        m = baseline - d1 * phi1
        return quadratic_roots(k + 4 * d1**2, -(k * dphi - 8 * m * d1), 4 * m**2 - k * prod)
    if label is C3:
        k = x1 * x2
        if player == 1:
            m = 2 * baseline - x1 * phi1
            return quadratic_roots(k + x1**2, -(k * dphi - 2 * m * x1), m**2 - k * prod)
        m = 2 * baseline - x2 * phi2
        return quadratic_roots(k + x2**2, -(k * dphi + 2 * m * x2), m**2 - k * prod)
    raise ValueError(f"no break-even form for {label}")


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class Certificate:
    """Constructive proof that a mutually beneficial valuation transfer exists.

    ``lo``/``hi`` bound an open interval of transfers in the canonical
    orientation, where every transfer is positive.  ``direction`` is -1 when
    the game had to be mirrored, so the transfers of the game as given are
    ``(-hi, -lo)``.  ``proposition`` is the appendix numbering for the
    transition, or None for a transition that numbering does not list.
    """

    kind: str  # "intra" or "inter"
    source: CaseLabel
    target: CaseLabel
    proposition: Optional[int]
    lo: float
    hi: float
    direction: int = 1

    @property
    def interval(self) -> tuple[float, float]:
        """The open interval of ``tau_v`` for the game as given."""
        if self.direction > 0:
            return (self.lo, self.hi)
        return (-self.hi, -self.lo)

    def sample(self, n: int = 100) -> np.ndarray:
        lo, hi = self.interval
        return lo + (hi - lo) * np.arange(1, n + 1) / (n + 1)


# (region, source, target) -> appendix numbering.  Intra-case transfers are
# numbered 2 (C2a) and 3 (C3); C1a has none.
INTER_CASE_TABLE: dict[tuple[BudgetRegion, CaseLabel, CaseLabel], int] = {
    (A1, C1a, C1b): 4,
    (A2, C1a, C1b): 5,
    (A2, C1a, C2b): 6,
    (A3, C1a, C2a): 7,
    (A3, C1a, C1b): 8,
    (A3, C2a, C1b): 9,
    (A4, C1a, C1b): 10,
    (A4, C1a, C2b): 11,
    (A4, C2a, C1b): 12,
    (A4, C2a, C2b): 13,
    (A5, C1a, C3): 14,
    (A5, C1a, C2b): 15,
    (A5, C2a, C3): 16,
    (A5, C2a, C2b): 17,
}

_ORDER = (C1a, C2a, C3, C2b, C1b)


def _beneficial_runs(
    g: GameInstance,
    target: CaseLabel,
    base: tuple[float, float],
    lo: float,
    hi: float,
) -> list[tuple[float, float]]:
    """Maximal sub-intervals of ``(lo, hi)`` where both regime-local gains are positive."""
    if not lo < hi:
        return []
    cuts = {lo, hi}
    for player in (1, 2):
        for z in breakeven_quadratic(target, player, g, base[player - 1]).roots:
            if lo < z < hi:
                cuts.add(z)
    pts = sorted(cuts)
    runs: list[list[float]] = []
    for a, b in zip(pts, pts[1:]):
        if not a < b:
            continue
        mid = 0.5 * (a + b)
        u1, u2 = local_payoffs(target, g, mid)
        if u1 > base[0] and u2 > base[1]:
            if runs and runs[-1][1] == a:
                runs[-1][1] = b
            else:
                runs.append([a, b])
    return [(a, b) for a, b in runs]


def _reachable(g: GameInstance, source: CaseLabel) -> list[CaseLabel]:
    """Regimes strictly after ``source`` that a positive transfer can reach."""
    later = _ORDER[_ORDER.index(source) + 1 :]
    out = []
    for label in later:
        lo, hi = case_interval(g, label)
        if max(lo, 0.0) < hi:
            out.append(label)
    return out


def _canonical_source(g: GameInstance) -> tuple[GameInstance, bool, CaseLabel]:
    canon, swapped = canonicalize(g)
    label = adversary.classify_case(PostTransferGame.from_game(canon))
    return canon, swapped, label


def _require_interior(canon: GameInstance) -> None:
    if adversary.case_slack(PostTransferGame.from_game(canon)) <= 0:
        raise OnCaseBoundary(f"{canon} lies on a case boundary")


def intra_case_beneficial(g: GameInstance) -> Optional[Certificate]:
    """Small transfers that keep the adversary in its current regime.

    C1a never admits one; C2a and C3 do exactly when both valuation
    derivatives at zero are positive.  The interval runs from zero to the
    nearer of the regime exit and either player's break-even point, found by
    root bracketing on the concave regime-local payoffs.
    """
    canon, swapped, source = _canonical_source(g)
    _require_interior(canon)
    if source is C1a:
        return None
    phi1, phi2, x1, x2 = canon.as_tuple()
    if source is C2a:
        ok = phi2 / phi1 < 1 and (2 - 4 * x2) / (phi1 - phi2) < math.sqrt(x1 * x2 / (phi1 * phi2))
        prop = 2
    elif source is C3:
        ok = phi2 / phi1 < 1 and x2 > 4 * phi1 * phi2 * x1 / (phi1 - phi2) ** 2
        prop = 3
    else:
        raise OnCaseBoundary(f"no intra-case analysis for {source}")
    if not ok:
        return None
    base = local_payoffs(source, canon, 0.0)
    _, case_hi = case_interval(canon, source)
    hi = case_hi
    for player in (0, 1):

        def gain(tau: float, player: int = player) -> float:
            return local_payoffs(source, canon, tau)[player] - base[player]

        # the gain rises from zero at the origin; find where it falls back
        if gain(case_hi) <= 0:
            left = _first_positive(gain, case_hi)
            hi = min(hi, brentq(gain, left, case_hi, xtol=1e-12, rtol=4 * np.finfo(float).eps))
    if not hi > 0:
        return None
    return Certificate("intra", source, source, prop, 0.0, hi, -1 if swapped else 1)


def _first_positive(gain: Callable[[float], float], hi: float) -> float:
    """A point in ``(0, hi)`` where ``gain`` is positive (it is just right of 0)."""
    t = hi / 2
    for _ in range(200):
        if gain(t) > 0:
            return t
        t /= 2
    raise OnCaseBoundary("gain never becomes positive to the right of zero")


def inter_case_beneficial(g: GameInstance, include_unlisted: bool = True) -> list[Certificate]:
    """Transfers that move the adversary into a later regime, one certificate per
    (source, target) transition with a nonempty beneficial interval.

    Transitions absent from ``INTER_CASE_TABLE`` are still evaluated unless
    ``include_unlisted`` is false; they carry ``proposition=None``.
    """
    canon, swapped, source = _canonical_source(g)
    if source is C4:
        return []
    _require_interior(canon)
    region = budget_region(canon)
    base = (player_payoffs(canon).u1, player_payoffs(canon).u2)
    out = []
    for target in _reachable(canon, source):
        prop = INTER_CASE_TABLE.get((region, source, target))
        if prop is None and not include_unlisted:
            continue
        lo, hi = case_interval(canon, target)
        for a, b in _beneficial_runs(canon, target, base, max(lo, 0.0), hi):
            out.append(Certificate("inter", source, target, prop, a, b, -1 if swapped else 1))
    return out


def in_gv(g: GameInstance, boundary_grid: int = 20_001) -> tuple[bool, list[Certificate]]:
    """Whether some valuation transfer is mutually beneficial, with certificates.

    A game exactly on a case boundary has no closed-form answer; it is
    decided by the grid search and its certificates have kind ``"oracle"``.
    """
    canon, swapped, source = _canonical_source(g)
    if source is C4:
        return False, []
    if adversary.case_slack(PostTransferGame.from_game(canon)) <= 0:
        from .oracle import search_valuation

        found = search_valuation(canon, boundary_grid)
        certs = [Certificate("oracle", source, source, None, lo, hi, -1 if swapped else 1)
                 for lo, hi in found.intervals]
        return bool(certs), certs
    certs = []
    intra = intra_case_beneficial(g)
    if intra is not None:
        certs.append(intra)
    certs.extend(inter_case_beneficial(g))
    return bool(certs), certs


def valuation_direction(g: GameInstance) -> int:
    """+1 when beneficial valuation transfers run from Player 1 to Player 2."""
    member, _ = in_gv(g)
    if not member:
        raise NotInGv(f"{g} admits no mutually beneficial valuation transfer")
    return 1 if g.phi1 * g.x2 > g.phi2 * g.x1 else -1


# ---------------------------------------------------------------------------
# Budget transfers


def in_gb(g: GameInstance, n: int = 20_001) -> bool:
    """Grid verdict over ``tau_b`` in ``(-x1, x2)``; there is no closed form here."""
    from .oracle import search_budget

    if n < 1_001:
        raise ValueError("grid size must be at least 1001")
    return bool(search_budget(g, n))


# ---------------------------------------------------------------------------
# Joint transfers


def _close(lhs: float, rhs: float, tol: float) -> bool:
    return abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs), 1e-300)


def in_measure_zero_joint(g: GameInstance, tol: float = 1e-9) -> bool:
    """Whether ``g`` lies in the exceptional set where the first-order
    argument for joint transfers breaks down: a case boundary, or one of the
    two isolated equalities inside C2a and C3."""
    canon, _ = canonicalize(g)
    p = PostTransferGame.from_game(canon)
    if adversary.case_slack(p) <= tol:
        return True
    phi1, phi2, x1, x2 = canon.as_tuple()
    label = adversary.classify_case(p)
    if label is C2a and phi1 != phi2:
        return _close(phi1 * (1 - 2 * x2) / (phi1 - phi2), x1 / (x1 + x2), tol)
    if label is C3 and phi1 != phi2:
        return _close(phi1 / phi2, 3.0, tol) and _close(
            x2, 4 * phi1 * phi2 * x1 / (phi1 - phi2) ** 2, tol
        )
    return False


def verification_step(g: GameInstance) -> float:
    return 1e-4 * min(g.as_tuple())


def joint_beneficial_direction(g: GameInstance, shrink: int = 8) -> tuple[float, float]:
    """Unit ``(d_b, d_v)`` along which both payoffs rise at first order.

    The direction bisects the two normalized gradients, so both directional
    derivatives are positive unless the gradients are opposed or one
    vanishes.  It is confirmed on the actual payoffs at
    ``verification_step(g)``, shrinking by 4 up to ``shrink`` times when
    curvature swamps the first-order gain.
    """
    try:
        g1, g2 = joint_gradients(g)
    except OnCaseBoundary as exc:
        raise NoDirection(str(exc)) from exc
    n1, n2 = math.hypot(g1.d_b, g1.d_v), math.hypot(g2.d_b, g2.d_v)
    if n1 == 0 or n2 == 0:
        raise NoDirection(f"a payoff gradient vanishes at {g}")
    sb = g1.d_b / n1 + g2.d_b / n2
    sv = g1.d_v / n1 + g2.d_v / n2
    norm = math.hypot(sb, sv)
    if norm <= 1e-12:
        raise NoDirection(f"payoff gradients are opposed at {g}")
    d = (sb / norm, sv / norm)
    if not (g1.dot(d) > 0 and g2.dot(d) > 0):
        raise NoDirection(f"no common ascent direction at {g}")
    step = verification_step(g)
    for _ in range(shrink + 1):
        delta = payoff_deltas(g, TransferPair(tau_v=step * d[1], tau_b=step * d[0]))
        if delta[0] > 0 and delta[1] > 0:
            return d
        step /= 4
    raise NoDirection(f"direction {d} fails the payoff check at {g}")


def joint_margin(g: GameInstance) -> float:
    """Angular gap between the two gradients and exact opposition, over pi.

    Zero on a case boundary or when a gradient vanishes.
    """
    try:
        g1, g2 = joint_gradients(g)
    except OnCaseBoundary:
        return 0.0
    n1, n2 = math.hypot(g1.d_b, g1.d_v), math.hypot(g2.d_b, g2.d_v)
    if n1 == 0 or n2 == 0:
        return 0.0
    cross = g1.d_b * g2.d_v - g1.d_v * g2.d_b
    dot = g1.d_b * g2.d_b + g1.d_v * g2.d_v
    return (math.pi - abs(math.atan2(cross, dot))) / math.pi


def joint_feasible(g: GameInstance, tol: float = 1e-9) -> bool:
    if in_measure_zero_joint(g, tol):
        return False
    try:
        joint_beneficial_direction(g)
    except NoDirection:
        return False
    return True


# ---------------------------------------------------------------------------
# Aggregate record


def _condition_slack(canon: GameInstance, label: CaseLabel) -> float:
    """Relative slack of the small-transfer condition for C2a / C3."""
    phi1, phi2, x1, x2 = canon.as_tuple()
    if phi1 == phi2:
        return 0.0
    if label is C2a:
        lhs = (2 - 4 * x2) / (phi1 - phi2)
        rhs = math.sqrt(x1 * x2 / (phi1 * phi2))
    elif label is C3:
        lhs, rhs = x2, 4 * phi1 * phi2 * x1 / (phi1 - phi2) ** 2
    else:
        return math.inf
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs))


def boundary_distance(g: GameInstance) -> float:
    """How far ``g`` is from flipping a valuation-transfer verdict.

    The minimum of the case slack, the slack of the small-transfer
    condition, and each certificate's width relative to ``phi1 + phi2``.
    Zero for Case 4.
    """
    canon, _, label = _canonical_source(g)
    p = PostTransferGame.from_game(canon)
    dist = adversary.case_slack(p)
    if dist == 0:
        return 0.0
    dist = min(dist, _condition_slack(canon, label))
    total = canon.phi1 + canon.phi2
    for cert in in_gv(g)[1]:
        dist = min(dist, (cert.hi - cert.lo) / total)
    return float(dist)


@dataclass(frozen=True)
class MembershipRecord:
    in_gv: bool
    certificates: tuple[Certificate, ...]
    in_gb: bool
    joint_feasible: bool
    in_measure_zero: bool
    case: CaseLabel
    region: BudgetRegion
    joint_direction: Optional[tuple[float, float]] = None
    near_boundary: bool = False


def membership(g: GameInstance, gb_grid: int = 20_001, tol: float = 1e-9) -> MembershipRecord:
    member, certs = in_gv(g)
    zero = in_measure_zero_joint(g, tol)
    direction = None
    if not zero:
        try:
            direction = joint_beneficial_direction(g)
        except NoDirection:
            direction = None
    return MembershipRecord(
        in_gv=member,
        certificates=tuple(certs),
        in_gb=in_gb(g, gb_grid),
        joint_feasible=direction is not None,
        in_measure_zero=zero,
        case=adversary.classify_case(PostTransferGame.from_game(g)),
        region=budget_region(g),
        joint_direction=direction,
        near_boundary=bool(boundary_distance(g) <= tol),
    )


def both_strong_condition(g: GameInstance) -> Optional[bool]:
    """Closed-form valuation-transfer test when both budgets are at least 1.

    With the weaker side first, a transfer exists iff
    ``(2 x1 x2 - x1 - x2) / (2 x1**2) < phi2 / phi1 < (2 x2 - 1) / (2 x1)``.
    None outside that region or on the ratio line.
    """
    canon, _ = canonicalize(g)
    phi1, phi2, x1, x2 = canon.as_tuple()
    if x1 < 1 or x2 < 1 or phi1 * x2 == phi2 * x1:
        return None
    ratio = phi2 / phi1
    return (2 * x1 * x2 - x1 - x2) / (2 * x1**2) < ratio < (2 * x2 - 1) / (2 * x1)
