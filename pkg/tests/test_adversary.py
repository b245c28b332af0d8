import numpy as np
import pytest

from coalblotto import adversary
from coalblotto.model import CaseLabel, GameInstance, PostTransferGame


def post(*v):
    return PostTransferGame(*v)


@pytest.mark.parametrize("p,label", [
    ((1.2, 1, 1.5, 2), CaseLabel.C1a),
    ((1.2, 1, 0.4, 0.9), CaseLabel.C2a),
    ((1.2, 1, 0.2, 0.3), CaseLabel.C3),
    ((1, 1, 1, 1), CaseLabel.C4),
    ((1, 1.2, 2, 1.5), CaseLabel.C1b),
    ((1, 1.2, 0.9, 0.4), CaseLabel.C2b),
])
def test_classify(p, label):
    assert adversary.classify_case(post(*p)) is label


def test_allocations():
    a = adversary.adversary_allocation(post(1.2, 1, 1.5, 2))
    assert (a.xa1, a.xa2) == (1.0, 0.0)
    a = adversary.adversary_allocation(post(1.2, 1, 0.2, 0.3))
    assert a.xa1 == pytest.approx(0.47214, abs=5e-6)
    assert a.xa2 == pytest.approx(0.52786, abs=5e-6)
    a = adversary.adversary_allocation(post(1, 1, 1, 1))
    assert (a.xa1, a.xa2) == (0.5, 0.5)


def test_case2_split_in_range():
    p = post(1.2, 1, 0.4, 0.9)
    a = adversary.adversary_allocation(p)
    assert a.xa2 == pytest.approx(1 - np.sqrt(1.2 * 0.4 * 0.9 / 1.0), rel=1e-15)
    assert 0 < a.xa2 <= p.x2_bar


def test_adversary_front_payoff():
    assert adversary.adversary_front_payoff(1.2, 1.5, 1) == pytest.approx(0.4)
    assert adversary.adversary_front_payoff(1, 0.3, 0) == 0
    assert adversary.adversary_front_payoff(2, 0.5, 0.5) == 1.0


def test_oracle_matches_closed_form():
    a = adversary.oracle_allocation(post(1.2, 1, 1.5, 2), 100_001)
    assert (a.xa1, a.xa2) == (1.0, 0.0)
    a = adversary.oracle_allocation(post(1.2, 1, 0.2, 0.3), 100_001)
    assert a.xa1 == pytest.approx(0.47214, abs=1e-5 + 5e-6)


def test_oracle_case4_plateau():
    p = post(1, 1, 1, 1)
    a = adversary.oracle_allocation(p, 101)
    best = adversary.adversary_payoff(p, adversary.adversary_allocation(p))
    assert adversary.adversary_payoff(p, a) == pytest.approx(best, abs=1e-12)
    grid = np.linspace(0, 1, 101)
    vals = [adversary.adversary_payoff(p, adversary.AdversaryAllocation(x, 1 - x)) for x in grid]
    assert int(np.argmax(vals)) == round(a.xa1 * 100)


def test_oracle_rejects_tiny_grid():
    with pytest.raises(ValueError):
        adversary.oracle_allocation(post(1, 1, 1, 1), 2)


def test_array_forms_match_scalars(rng):
    p1, p2, x1, x2 = np.exp(rng.uniform(-3, 1.5, size=(4, 2_000)))
    xa1, xa2 = adversary.allocation_array(p1, p2, x1, x2)
    u1, u2 = adversary.player_payoffs_array(p1, p2, x1, x2)
    code, _, _ = adversary.classify_array(p1, p2, x1, x2)
    for i in range(0, 2_000, 7):
        p = post(p1[i], p2[i], x1[i], x2[i])
        a = adversary.adversary_allocation(p)
        assert (xa1[i], xa2[i]) == (a.xa1, a.xa2)
        assert adversary.CASE_CODES[code[i]] is adversary.classify_case(p)


def test_mirror_is_exact(rng):
    for v in np.exp(rng.uniform(-3, 1.5, size=(500, 4))):
        a = adversary.adversary_allocation(post(*v))
        b = adversary.adversary_allocation(post(v[1], v[0], v[3], v[2]))
        assert (a.xa1, a.xa2) == (b.xa2, b.xa1)


def test_allocation_sums_to_one(rng):
    for v in np.exp(rng.uniform(-4, 1.6, size=(2_000, 4))):
        a = adversary.adversary_allocation(post(*v))
        assert 0 <= a.xa1 <= 1 and 0 <= a.xa2 <= 1
        assert abs(a.xa1 + a.xa2 - 1) <= 1e-12


def test_case_slack_zero_on_boundary():
    assert adversary.case_slack(post(1, 1, 1, 1)) == 0.0
    # q == 1 separates Case 1 from Case 2
    assert adversary.case_slack(post(1.0, 1.0, 0.5, 2.0)) == 0.0
    assert adversary.case_slack(post(1.2, 1, 0.2, 0.3)) > 0
