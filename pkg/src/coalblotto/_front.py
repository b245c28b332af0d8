"""Per-front General Lotto equilibrium payoff, scalar and array forms.

Both forms use the same operation order so they agree bit for bit.
"""

import numpy as np


def front_payoff(phi: float, x_p: float, x_a: float) -> float:
    """Value the player keeps on a front of total value ``phi``.

    ``x_a == 0`` is the uncontested limit: the player keeps everything.
    """
    if x_a == 0:
        return phi
    if x_p <= x_a:
        return phi * x_p / (2 * x_a)
    return phi * (1 - x_a / (2 * x_p))


def front_payoff_array(phi, x_p, x_a):
    phi, x_p, x_a = np.broadcast_arrays(
        np.asarray(phi, dtype=float), np.asarray(x_p, dtype=float), np.asarray(x_a, dtype=float)
    )
    safe_a = np.where(x_a == 0, 1.0, x_a)
    weak = phi * x_p / (2 * safe_a)
    strong = phi * (1 - x_a / (2 * x_p))
    out = np.where(x_p <= x_a, weak, strong)
    return np.where(x_a == 0, phi, out)
