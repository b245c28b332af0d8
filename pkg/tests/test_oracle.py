import json
import os

import numpy as np
import pytest

from coalblotto import oracle, transfers
from coalblotto.model import GameInstance, TransferPair
from coalblotto.payoffs import payoff_deltas

GOLDEN = json.load(open(os.path.join(os.path.dirname(__file__), "golden", "golden.json")))


def test_search_valuation_fig3(fig3_game):
    found = oracle.search_valuation(fig3_game, 20_001)
    (lo, hi), = found.intervals
    assert abs(lo - 1 / 3) <= 2 * found.grid_step
    assert abs(hi - 0.4) <= 2 * found.grid_step


def test_search_valuation_case4_empty():
    assert not oracle.search_valuation(GameInstance(1, 1, 1, 1), 20_001)


def test_search_valuation_small_transfer():
    found = oracle.search_valuation(GameInstance(1.2, 1, 0.4, 0.9), 20_001)
    assert found and abs(found.intervals[0][0]) <= 2 * found.grid_step


def test_search_budget_examples(fig3_game):
    assert not oracle.search_budget(fig3_game, 20_001)
    assert not oracle.search_budget(GameInstance(1, 1, 1, 1), 20_001)
    got = oracle.search_budget(GameInstance(1.2, 1, 0.4, 0.9), 20_001)
    assert [list(iv) for iv in got.intervals] == GOLDEN["search_budget/1.2,1,0.4,0.9/n=20001"]


def test_search_valuation_golden():
    got = oracle.search_valuation(GameInstance(1.2, 1, 0.2, 0.3), 20_001)
    assert [list(iv) for iv in got.intervals] == GOLDEN["search_valuation/1.2,1,0.2,0.3/n=20001"]


def test_grid_minimum():
    with pytest.raises(ValueError):
        oracle.search_valuation(GameInstance(1, 1, 1, 1), 1_000)
    with pytest.raises(ValueError):
        oracle.search_joint(GameInstance(1, 1, 1, 1), 100, 101)


def test_search_joint(fig3_game):
    t = oracle.search_joint(fig3_game, 201, 201)
    assert t is not None
    d1, d2 = payoff_deltas(fig3_game, t)
    assert d1 > 0 and d2 > 0
    assert oracle.search_joint(GameInstance(1.2, 1, 0.2, 0.3), 201, 201) is not None
    assert oracle.search_joint(GameInstance(1, 1, 1, 1), 201, 201) is None


def test_found_points_recompute(rng):
    for g in oracle.random_games(rng, 40):
        found = oracle.search_valuation(g, 2_001)
        for tau in found.points[::50]:
            d1, d2 = payoff_deltas(g, TransferPair(tau_v=tau))
            assert d1 > 0 and d2 > 0


def test_refinement_keeps_wide_intervals(rng):
    for g in oracle.random_games(rng, 60):
        coarse = oracle.search_valuation(g, 2_001)
        fine = oracle.search_valuation(g, 4_003)
        for lo, hi in coarse.intervals:
            if hi - lo > 4 * coarse.grid_step:
                assert any(a <= hi and b >= lo for a, b in fine.intervals)


def test_swap_invariance(rng):
    for g in oracle.random_games(rng, 60):
        a = oracle.search_valuation(g, 2_001)
        b = oracle.search_valuation(g.swapped(), 2_001)
        assert len(a.intervals) == len(b.intervals)
        for (lo, hi), (blo, bhi) in zip(a.intervals, reversed(b.intervals)):
            assert lo == pytest.approx(-bhi, abs=2 * a.grid_step)
            assert hi == pytest.approx(-blo, abs=2 * a.grid_step)


def test_agreement_report_small():
    r = oracle.agreement_report(1, seed=7, n=2_001)
    assert r.samples == 1
    assert sum(r.agree.values()) + sum(r.disagree.values()) + r.boundary_excluded in (0, 1, 2, 3)


def test_agreement_report_deterministic():
    a = oracle.agreement_report(60, seed=42, n=2_001)
    b = oracle.agreement_report(60, seed=42, n=2_001)
    assert a.to_json() == b.to_json()
    assert a.disagree == {"gv": 0, "gb": 0, "joint": 0}


def test_random_games_ranges(rng):
    gs = oracle.random_games(rng, 500)
    arr = np.array([g.as_tuple() for g in gs])
    assert arr[:, :2].min() >= 0.2 and arr[:, :2].max() <= 4.0
    assert arr[:, 2:].min() >= 0.05 and arr[:, 2:].max() <= 4.0
