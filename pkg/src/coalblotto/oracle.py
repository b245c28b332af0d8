"""Brute-force ground truth: grid searches over transfers with a full adversary
re-best-response at every grid point."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .adversary import player_payoffs_array
from .model import GameInstance, TransferPair

MIN_GRID = 1_001


@dataclass(frozen=True)
class FeasibleIntervals:
    """Disjoint runs of grid points where both payoff deltas are positive.

    Each run is reported as the open interval spanned by its first and last
    grid points; the true endpoints lie within one ``grid_step`` outside.
    """

    intervals: tuple[tuple[float, float], ...]
    grid_step: float
    points: tuple[float, ...] = field(default=(), repr=False)

    @property
    def empty(self) -> bool:
        return not self.intervals

    def __bool__(self) -> bool:
        return not self.empty


def interior_grid(lo: float, hi: float, n: int) -> tuple[np.ndarray, float]:
    """``n`` points strictly inside ``(lo, hi)``, one step clear of each end."""
    step = (hi - lo) / (n + 1)
    return lo + step * np.arange(1, n + 1), step


def _deltas(g: GameInstance, tau_v, tau_b):
    tau_v = np.asarray(tau_v, dtype=float)
    tau_b = np.asarray(tau_b, dtype=float)
    u1, u2 = player_payoffs_array(g.phi1 - tau_v, g.phi2 + tau_v, g.x1 + tau_b, g.x2 - tau_b)
    b1, b2 = player_payoffs_array(g.phi1, g.phi2, g.x1, g.x2)
    return u1 - b1, u2 - b2


def _runs(grid: np.ndarray, ok: np.ndarray, step: float) -> FeasibleIntervals:
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return FeasibleIntervals((), step)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    intervals = tuple((float(grid[a]), float(grid[b])) for a, b in zip(starts, ends))
    return FeasibleIntervals(intervals, step, tuple(float(v) for v in grid[idx]))


def search_valuation(g: GameInstance, n: int = 20_001) -> FeasibleIntervals:
    if n < MIN_GRID:
        raise ValueError(f"grid size must be at least {MIN_GRID}")
    grid, step = interior_grid(-g.phi2, g.phi1, n)
    d1, d2 = _deltas(g, grid, 0.0)
    return _runs(grid, (d1 > 0) & (d2 > 0), step)


def search_budget(g: GameInstance, n: int = 20_001) -> FeasibleIntervals:
    if n < MIN_GRID:
        raise ValueError(f"grid size must be at least {MIN_GRID}")
    grid, step = interior_grid(-g.x1, g.x2, n)
    d1, d2 = _deltas(g, 0.0, grid)
    return _runs(grid, (d1 > 0) & (d2 > 0), step)


def search_joint(
    g: GameInstance, n_b: int = 401, n_v: int = 401, batch: int = 1 << 20
) -> Optional[TransferPair]:
    """Grid point maximizing ``min(delta1, delta2)`` among those where both are positive."""
    if n_b < 101 or n_v < 101:
        raise ValueError("grid sizes must be at least 101")
    tb, _ = interior_grid(-g.x1, g.x2, n_b)
    tv, _ = interior_grid(-g.phi2, g.phi1, n_v)
    best, best_val = None, 0.0
    rows = max(1, batch // n_v)
    for start in range(0, n_b, rows):
        b = tb[start : start + rows, None]
        d1, d2 = _deltas(g, tv[None, :], b)
        score = np.minimum(d1, d2)
        k = int(np.argmax(score))
        if score.flat[k] > best_val:
            i, j = np.unravel_index(k, score.shape)
            best_val = float(score[i, j])
            best = TransferPair(float(tv[j]), float(b[i, 0]))
    return best


def search_joint_local(g: GameInstance, radius: float = 1e-4, n_angles: int = 3_600,
                       rings: int = 4) -> Optional[TransferPair]:
    """Polar grid around the origin: ``rings`` radii down from ``radius`` times
    ``min(phi1, phi2, x1, x2)``, ``n_angles`` directions each.

    Returns the best point found on the outermost ring that has one.
    """
    scale = radius * min(g.as_tuple())
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    for ring in range(rings):
        r = scale / 4**ring
        tb, tv = r * np.cos(theta), r * np.sin(theta)
        d1, d2 = _deltas(g, tv, tb)
        score = np.minimum(d1, d2)
        k = int(np.argmax(score))
        if score[k] > 0:
            return TransferPair(float(tv[k]), float(tb[k]))
    return None


# ---------------------------------------------------------------------------
# Agreement between closed-form predicates and the grids


def random_games(rng: np.random.Generator, count: int,
                 budgets=(0.05, 4.0), values=(0.2, 4.0)) -> list[GameInstance]:
    lb = np.log(budgets)
    lv = np.log(values)
    x = np.exp(rng.uniform(lb[0], lb[1], size=(count, 2)))
    p = np.exp(rng.uniform(lv[0], lv[1], size=(count, 2)))
    return [GameInstance(float(p[i, 0]), float(p[i, 1]), float(x[i, 0]), float(x[i, 1]))
            for i in range(count)]


@dataclass
class AgreementReport:
    samples: int
    seed: int
    agree: dict = field(default_factory=dict)
    disagree: dict = field(default_factory=dict)
    boundary_excluded: int = 0
    joint_excluded: int = 0
    disagreements: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "samples": self.samples,
                "seed": self.seed,
                "agree": self.agree,
                "disagree": self.disagree,
                "boundary_excluded": self.boundary_excluded,
                "joint_excluded": self.joint_excluded,
                "disagreements": self.disagreements,
            },
            sort_keys=True,
        )


def agreement_report(samples: int, seed: int = 42, n: int = 20_001,
                     margin: float = 1e-3, check_gb: bool = True,
                     check_joint: bool = True) -> AgreementReport:
    """Compare ``in_gv``/``in_gb``/joint predicates with the grid searches.

    Games within ``margin`` of a valuation-predicate boundary are excluded
    and counted; the joint check additionally skips games whose gradients are
    within ``margin`` (as a fraction of pi) of exact opposition, where the
    beneficial cone is too thin for the polar grid.
    """
    from . import transfers

    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    report = AgreementReport(samples, seed)
    keys = ["gv"] + (["gb"] if check_gb else []) + (["joint"] if check_joint else [])
    for k in keys:
        report.agree[k] = 0
        report.disagree[k] = 0
    for g in random_games(rng, samples):
        if transfers.boundary_distance(g) <= margin:
            report.boundary_excluded += 1
            continue
        verdicts = {"gv": (transfers.in_gv(g)[0], bool(search_valuation(g, n)))}
        if check_gb:
            # the closed form is itself a grid search; compare against a refined grid
            verdicts["gb"] = (transfers.in_gb(g, n), bool(search_budget(g, 2 * n + 1)))
        if check_joint and transfers.joint_margin(g) <= margin:
            report.joint_excluded += 1
        elif check_joint:
            verdicts["joint"] = (transfers.joint_feasible(g),
                                 search_joint_local(g) is not None)
        for k, (closed, grid) in verdicts.items():
            if closed == grid:
                report.agree[k] += 1
            else:
                report.disagree[k] += 1
                report.disagreements.append(
                    {"check": k, "game": list(g.as_tuple()), "closed": closed, "oracle": grid}
                )
    return report
