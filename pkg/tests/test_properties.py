"""Property-based checks over random parameters."""

import math

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from coalblotto import adversary, transfers
from coalblotto.model import GameInstance, PostTransferGame, TransferPair, apply_transfer
from coalblotto.payoffs import front_payoff, payoff_deltas, player_payoffs

positive = st.floats(min_value=0.01, max_value=5.0, allow_nan=False, allow_infinity=False)
games = st.builds(GameInstance, positive, positive, positive, positive)
unit = st.floats(min_value=0.001, max_value=0.999)


@given(games, unit, unit)
def test_transfer_conserves_totals(g, a, b):
    t = TransferPair(-g.phi2 + a * (g.phi1 + g.phi2), -g.x1 + b * (g.x1 + g.x2))
    p = apply_transfer(g, t)
    assert abs(p.phi1_bar + p.phi2_bar - (g.phi1 + g.phi2)) <= 1e-12
    assert abs(p.x1_bar + p.x2_bar - (g.x1 + g.x2)) <= 1e-12
    assert min(p.as_tuple()) > 0


@given(positive, positive, st.floats(min_value=0.0, max_value=1.0))
def test_front_zero_sum(phi, xp, xa):
    assert abs(front_payoff(phi, xp, xa) + adversary.adversary_front_payoff(phi, xp, xa) - phi) <= 1e-12


@given(games)
def test_closed_form_beats_coarse_grid(g):
    p = PostTransferGame.from_game(g)
    best = adversary.adversary_payoff(p, adversary.adversary_allocation(p))
    grid = adversary.adversary_payoff(p, adversary.oracle_allocation(p, 2_001))
    assert best >= grid - 1e-9 * (g.phi1 + g.phi2)


@given(games)
def test_swap_mirrors_payoffs(g):
    u, v = player_payoffs(g), player_payoffs(g.swapped())
    assert (u.u1, u.u2) == (v.u2, v.u1)


@given(games)
def test_case_label_mirrors(g):
    a = adversary.classify_case(PostTransferGame.from_game(g))
    b = adversary.classify_case(PostTransferGame.from_game(g.swapped()))
    mirror = {"C1a": "C1b", "C2a": "C2b", "C1b": "C1a", "C2b": "C2a", "C3": "C3", "C4": "C4"}
    if g.phi1 * g.x2 != g.phi2 * g.x1:
        assert mirror[a.value] == b.value


@settings(max_examples=60, deadline=None)
@given(games)
def test_certificates_sound(g):
    assume(transfers.boundary_distance(g) > 1e-6)
    for c in transfers.in_gv(g)[1]:
        for tau in c.sample(20):
            d1, d2 = payoff_deltas(g, TransferPair(tau_v=float(tau)))
            assert d1 > 0 and d2 > 0


@settings(max_examples=60, deadline=None)
@given(games)
def test_joint_direction_off_exceptional_set(g):
    assume(not transfers.in_measure_zero_joint(g) and transfers.joint_margin(g) > 1e-9)
    d = transfers.joint_beneficial_direction(g)
    assert math.isclose(math.hypot(*d), 1.0)


@settings(max_examples=40, deadline=None)
@given(games)
def test_budget_region_partition(g):
    x1, x2 = g.x1, g.x2
    preds = [x1 >= 1 and x2 >= 1, x1 >= 1 and x2 < 1 and x1 + x2 >= 1,
             x1 < 1 and x2 >= 1 and x1 + x2 >= 1, x1 < 1 and x2 < 1 and x1 + x2 >= 1, x1 + x2 < 1]
    assert sum(preds) == 1
