"""Recompute the oracle outputs stored in golden.json.

Run only when the oracle itself changes; the tests compare against the
stored file, never against values typed by hand.
"""

import json
import os

from coalblotto import oracle, transfers
from coalblotto.model import GameInstance

HERE = os.path.dirname(os.path.abspath(__file__))


def build():
    a4 = GameInstance(1.2, 1.0, 0.4, 0.9)
    a5 = GameInstance(1.2, 1.0, 0.2, 0.3)
    return {
        "search_budget/1.2,1,0.4,0.9/n=20001": [list(iv) for iv in oracle.search_budget(a4, 20_001).intervals],
        "in_gb/1.2,1,0.4,0.9/n=20001": transfers.in_gb(a4, 20_001),
        "search_valuation/1.2,1,0.2,0.3/n=20001": [list(iv) for iv in oracle.search_valuation(a5, 20_001).intervals],
        "inter_case/1.2,1,0.2,0.3": [[c.proposition, c.lo, c.hi] for c in transfers.inter_case_beneficial(a5)],
    }


if __name__ == "__main__":
    with open(os.path.join(HERE, "golden.json"), "w", encoding="utf-8") as fh:
        json.dump(build(), fh, indent=2, sort_keys=True)
        fh.write("\n")
