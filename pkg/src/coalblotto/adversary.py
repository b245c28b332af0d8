"""Adversary best response: regime classification and the budget split.

All conditions are evaluated on the canonical orientation (the relatively
weaker player first); results for the mirrored orientation are swapped back.
Rows are tried in order 1, 2, 3, 4 and the first match wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._front import front_payoff, front_payoff_array
from .model import CaseLabel, PostTransferGame, is_canonical


class Unclassifiable(RuntimeError):
    """No row of the best-response table matched (a logic error)."""


@dataclass(frozen=True)
class AdversaryAllocation:
    xa1: float
    xa2: float


# Integer codes used by the array functions.
CASE_CODES = (CaseLabel.C1a, CaseLabel.C2a, CaseLabel.C3, CaseLabel.C4, CaseLabel.C1b, CaseLabel.C2b)
CODE_OF = {label: i for i, label in enumerate(CASE_CODES)}
_MIRROR = {1: CaseLabel.C1b, 2: CaseLabel.C2b, 3: CaseLabel.C3, 4: CaseLabel.C4}
_PLAIN = {1: CaseLabel.C1a, 2: CaseLabel.C2a, 3: CaseLabel.C3, 4: CaseLabel.C4}


def _row(pw: float, ps: float, xw: float, xs: float) -> int:
    """Best-response row (1-4) for a canonical game (pw/ps >= xw/xs)."""
    strict = pw * xs > ps * xw
    q = pw * xw * xs / ps
    if strict and q >= 1:
        return 1
    root = math.sqrt(q)
    if strict and q < 1 and 1 - root <= xs:
        return 2
    if 1 - root > xs:
        return 3
    if not strict:
        return 4
    raise Unclassifiable(
        f"no row matched: strict={strict}, q={q!r}, 1-sqrt(q)={1 - root!r}, xs={xs!r}"
    )


def _split(row: int, pw: float, ps: float, xw: float, xs: float) -> tuple[float, float]:
    if row == 1:
        return 1.0, 0.0
    if row == 2:
        aw = math.sqrt(pw * xw * xs / ps)
        return aw, 1 - aw
    if row == 3:
        sw = math.sqrt(pw * xw)
        ss = math.sqrt(ps * xs)
        return sw / (sw + ss), ss / (sw + ss)
    return xw / (xw + xs), xs / (xw + xs)


def _orient(p1, p2, x1, x2):
    if is_canonical(p1, p2, x1, x2):
        return False, (p1, p2, x1, x2)
    return True, (p2, p1, x2, x1)


def classify_case(p: PostTransferGame) -> CaseLabel:
    swapped, canon = _orient(*p.as_tuple())
    row = _row(*canon)
    return (_MIRROR if swapped else _PLAIN)[row]


def adversary_allocation(p: PostTransferGame) -> AdversaryAllocation:
    swapped, canon = _orient(*p.as_tuple())
    aw, as_ = _split(_row(*canon), *canon)
    if swapped:
        return AdversaryAllocation(as_, aw)
    return AdversaryAllocation(aw, as_)


def adversary_front_payoff(phi: float, x_p: float, x_a: float) -> float:
    return phi - front_payoff(phi, x_p, x_a)


def adversary_payoff(p: PostTransferGame, a: AdversaryAllocation) -> float:
    return adversary_front_payoff(p.phi1_bar, p.x1_bar, a.xa1) + adversary_front_payoff(
        p.phi2_bar, p.x2_bar, a.xa2
    )


def oracle_allocation(p: PostTransferGame, n: int = 10_001) -> AdversaryAllocation:
    """Grid argmax of the adversary's total payoff over xa1 in {0, 1/(n-1), ..., 1}.

    Ties go to the first (smallest) grid index.
    """
    if n < 3:
        raise ValueError("grid size must be at least 3")
    xa1 = np.linspace(0.0, 1.0, n)
    xa2 = 1.0 - xa1
    total = (p.phi1_bar - front_payoff_array(p.phi1_bar, p.x1_bar, xa1)) + (
        p.phi2_bar - front_payoff_array(p.phi2_bar, p.x2_bar, xa2)
    )
    k = int(np.argmax(total))
    return AdversaryAllocation(float(xa1[k]), float(xa2[k]))


# ---------------------------------------------------------------------------
# Array forms (broadcasting over any shape); same arithmetic as the scalars.


def classify_array(p1, p2, x1, x2):
    """Integer case codes (indices into ``CASE_CODES``); -1 marks no match."""
    p1, p2, x1, x2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (p1, p2, x1, x2)))
    swapped = ~(p1 * x2 >= p2 * x1)
    pw = np.where(swapped, p2, p1)
    ps = np.where(swapped, p1, p2)
    xw = np.where(swapped, x2, x1)
    xs = np.where(swapped, x1, x2)
    strict = pw * xs > ps * xw
    q = pw * xw * xs / ps
    root = np.sqrt(q)
    r1 = strict & (q >= 1)
    r2 = strict & (q < 1) & (1 - root <= xs)
    r3 = 1 - root > xs
    r4 = ~strict
    row = np.select([r1, r2, r3, r4], [1, 2, 3, 4], default=0)
    code = np.full(row.shape, -1, dtype=np.int64)
    code = np.where(row == 1, np.where(swapped, 4, 0), code)
    code = np.where(row == 2, np.where(swapped, 5, 1), code)
    code = np.where(row == 3, 2, code)
    code = np.where(row == 4, 3, code)
    return code, row, swapped


def allocation_array(p1, p2, x1, x2):
    """Adversary split ``(xa1, xa2)`` as arrays."""
    p1, p2, x1, x2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (p1, p2, x1, x2)))
    code, row, swapped = classify_array(p1, p2, x1, x2)
    if np.any(code < 0):
        raise Unclassifiable("no row matched for some inputs")
    pw = np.where(swapped, p2, p1)
    ps = np.where(swapped, p1, p2)
    xw = np.where(swapped, x2, x1)
    xs = np.where(swapped, x1, x2)
    a2 = np.sqrt(pw * xw * xs / ps)
    sw = np.sqrt(pw * xw)
    ss = np.sqrt(ps * xs)
    aw = np.select(
        [row == 1, row == 2, row == 3],
        [1.0, a2, sw / (sw + ss)],
        default=xw / (xw + xs),
    )
    as_ = np.select(
        [row == 1, row == 2, row == 3],
        [0.0, 1 - a2, ss / (sw + ss)],
        default=xs / (xw + xs),
    )
    xa1 = np.where(swapped, as_, aw)
    xa2 = np.where(swapped, aw, as_)
    return xa1, xa2


def player_payoffs_array(p1, p2, x1, x2):
    """Equilibrium payoffs of both players for post-transfer parameters."""
    xa1, xa2 = allocation_array(p1, p2, x1, x2)
    return front_payoff_array(p1, x1, xa1), front_payoff_array(p2, x2, xa2)


def case_slack(p: PostTransferGame) -> float:
    """Smallest relative slack among the inequalities that define the case of ``p``.

    Zero means ``p`` sits exactly on a case boundary (Case 4 is all boundary).
    """
    _, (pw, ps, xw, xs) = _orient(*p.as_tuple())
    row = _row(pw, ps, xw, xs)
    if row == 4:
        return 0.0
    ratio = abs(pw * xs - ps * xw) / (pw * xs + ps * xw)
    q = pw * xw * xs / ps
    split = abs((1 - math.sqrt(q)) - xs) / (1 + xs)
    if row == 1:
        return min(ratio, (q - 1) / (q + 1))
    if row == 2:
        return min(ratio, (1 - q) / (1 + q), split)
    return split
