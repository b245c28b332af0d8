"""Command-line front end: single-game reports, budget-plane scans, random
samples and payoff sweeps.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal

import numpy as np

from . import adversary, transfers
from .model import GameInstance, ModelError, PostTransferGame, TransferPair
from .payoffs import payoff_deltas, player_payoffs

EXIT_USAGE = 2
EXIT_IO = 3

SCAN_HEADER = "x1,x2,in_gv,in_gb,joint,measure_zero,case,region"
SWEEP_HEADER = "tau_v,delta_u1,delta_u2"
MC_HEADER = "x1,x2,in_gv"


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(v))


def flag(b: bool) -> str:
    return "1" if b else "0"


# ---------------------------------------------------------------------------
# Grids and rows


def axis(lo: float, hi: float, step: float) -> list[float]:
    """Points of ``(lo, hi]`` anchored at ``hi``: hi, hi - step, ... > lo, ascending.

    Decimal arithmetic keeps 0.02-style steps free of accumulated drift.
    """
    if not step > 0:
        raise UsageError("step must be > 0")
    if not (0 <= lo < hi):
        raise UsageError(f"bad range ({lo}, {hi}]: need 0 <= lo < hi")
    dlo, dhi, dstep = Decimal(repr(lo)), Decimal(repr(hi)), Decimal(repr(step))
    pts = []
    v = dhi
    while v > dlo:
        pts.append(float(v))
        v -= dstep
    return pts[::-1]


def scan_row(args: tuple[float, float, float, list[float], int]) -> list[str]:
    phi1, phi2, x2, xs1, gb_grid = args
    lines = []
    for x1 in xs1:
        g = GameInstance(phi1, phi2, x1, x2)
        m = transfers.membership(g, gb_grid=gb_grid)
        lines.append(",".join([
            fmt(x1), fmt(x2), flag(m.in_gv), flag(m.in_gb), flag(m.joint_feasible),
            flag(m.in_measure_zero), str(m.case), str(m.region),
        ]))
    return lines


def mc_row(args: tuple[float, float, int, int, float, float]) -> str:
    phi1, phi2, seed, i, lo, hi = args
    rng = np.random.default_rng([seed, i])
    # (lo, hi] so that lo = 0 never yields a zero budget
    x1 = hi - (hi - lo) * rng.random()
    x2 = hi - (hi - lo) * rng.random()
    g = GameInstance(phi1, phi2, x1, x2)
    return ",".join([fmt(x1), fmt(x2), flag(transfers.in_gv(g)[0])])


def _map(fn, jobs: list, workers: int) -> list:
    """Apply ``fn`` in order; with several workers, contiguous blocks per worker."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    chunk = -(-len(jobs) // workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=chunk))


def _write(path: str, header: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for line in lines:
            fh.write(line + "\n")


# ---------------------------------------------------------------------------
# Commands


def check_report(g: GameInstance, gb_grid: int = 20_001) -> dict:
    p = PostTransferGame.from_game(g)
    a = adversary.adversary_allocation(p)
    u = player_payoffs(g)
    m = transfers.membership(g, gb_grid=gb_grid)
    certs = []
    for c in m.certificates:
        lo, hi = c.interval
        certs.append({"prop": c.proposition, "lo": lo, "hi": hi,
                      "source": str(c.source), "target": str(c.target)})
    return {
        "game": {"phi1": g.phi1, "phi2": g.phi2, "x1": g.x1, "x2": g.x2},
        "case": str(m.case),
        "region": str(m.region),
        "allocation": {"xa1": a.xa1, "xa2": a.xa2},
        "payoffs": {"u1": u.u1, "u2": u.u2},
        "gv": {"member": m.in_gv, "certificates": certs},
        "gb": m.in_gb,
        "joint": m.joint_feasible,
        "joint_direction": list(m.joint_direction) if m.joint_direction else None,
        "measure_zero": m.in_measure_zero,
    }


def _print_check(r: dict, out) -> None:
    g = r["game"]
    print(f"game          phi1={fmt(g['phi1'])} phi2={fmt(g['phi2'])} "
          f"x1={fmt(g['x1'])} x2={fmt(g['x2'])}", file=out)
    print(f"case          {r['case']}", file=out)
    print(f"region        {r['region']}", file=out)
    a, u = r["allocation"], r["payoffs"]
    print(f"allocation    xa1={a['xa1']:.6g} xa2={a['xa2']:.6g}", file=out)
    print(f"payoffs       u1={u['u1']:.6g} u2={u['u2']:.6g}", file=out)
    print(f"gv            {r['gv']['member']}", file=out)
    for c in r["gv"]["certificates"]:
        prop = "-" if c["prop"] is None else c["prop"]
        print(f"  prop {prop:<3} {c['source']}->{c['target']}  "
              f"tau_v in ({c['lo']:.4f}, {c['hi']:.4f})", file=out)
    print(f"gb            {r['gb']}", file=out)
    joint = f"{r['joint']}"
    if r["joint_direction"]:
        db, dv = r["joint_direction"]
        joint += f"  (d_b, d_v)=({db:.6g}, {dv:.6g})"
    print(f"joint         {joint}", file=out)
    print(f"measure_zero  {r['measure_zero']}", file=out)


def cmd_check(ns) -> int:
    g = GameInstance(*ns.game)
    report = check_report(g, ns.gb_grid)
    if ns.json:
        print(json.dumps(report))
    else:
        _print_check(report, sys.stdout)
    return 0


def cmd_scan(ns) -> int:
    GameInstance(ns.phi1, ns.phi2, 1.0, 1.0)
    xs1 = axis(*ns.x1_range, ns.step)
    xs2 = axis(*ns.x2_range, ns.step)
    jobs = [(ns.phi1, ns.phi2, x2, xs1, ns.gb_grid) for x2 in xs2]
    lines = [line for block in _map(scan_row, jobs, ns.workers) for line in block]
    _write(ns.out, SCAN_HEADER, lines)
    if ns.svg:
        colours = {(True, False): "#1f5fbf", (False, True): "#c0392b", (True, True): "#7d3c98"}
        pts = []
        for line in lines:
            f = line.split(",")
            key = (f[2] == "1", f[3] == "1")
            pts.append((float(f[0]), float(f[1]), colours.get(key, "#999"), key != (False, False)))
        from ._svg import scatter
        scatter(pts, ns.svg)
    return 0


def cmd_sweep(ns) -> int:
    g = GameInstance(*ns.game)
    lo, hi = ns.tau if ns.tau else (-g.phi2, g.phi1)
    if ns.n < 2:
        raise UsageError("n must be >= 2")
    if not lo < hi:
        raise UsageError(f"bad tau range ({lo}, {hi})")
    dlo, dhi = Decimal(repr(lo)), Decimal(repr(hi))
    width = dhi - dlo
    taus = [float(dlo + width * k / (ns.n - 1)) for k in range(ns.n)]
    lines = []
    for t in taus:
        # the transfer domain is open; a range endpoint on its edge is skipped
        if t in (-g.phi2, g.phi1):
            continue
        if not -g.phi2 < t < g.phi1:
            raise UsageError(f"tau_v={t} outside ({-g.phi2}, {g.phi1})")
        d1, d2 = payoff_deltas(g, TransferPair(tau_v=t))
        lines.append(",".join([fmt(t), fmt(d1), fmt(d2)]))
    _write(ns.out, SWEEP_HEADER, lines)
    return 0


def cmd_mc(ns) -> int:
    GameInstance(ns.phi1, ns.phi2, 1.0, 1.0)
    if ns.samples < 1:
        raise UsageError("samples must be >= 1")
    lo, hi = ns.x_range
    if not (0 <= lo < hi):
        raise UsageError(f"bad budget range ({lo}, {hi}]")
    jobs = [(ns.phi1, ns.phi2, ns.seed, i, lo, hi) for i in range(ns.samples)]
    lines = _map(mc_row, jobs, ns.workers)
    _write(ns.out, MC_HEADER, lines)
    members = applicable = agree = 0
    pts = []
    for line in lines:
        x1, x2, member = line.split(",")
        member = member == "1"
        members += member
        closed = transfers.both_strong_condition(GameInstance(ns.phi1, ns.phi2, float(x1), float(x2)))
        if closed is not None:
            applicable += 1
            agree += closed == member
        pts.append((float(x1), float(x2), "#000", member))
    print(f"in_gv for {members} of {ns.samples} samples; "
          f"both-budgets-at-least-1 closed form applies to {applicable}, agrees on {agree}")
    if ns.svg:
        from ._svg import scatter
        scatter(pts, ns.svg)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coalblotto",
        description="Transfers between two players facing a common adversary "
                    "(three-stage coalitional Colonel Blotto game).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="report on one game")
    c.add_argument("game", nargs=4, type=float, help="PHI1 PHI2 X1 X2")
    c.add_argument("--json", action="store_true")
    c.add_argument("--gb-grid", type=int, default=20_001)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("scan", help="membership over a grid of budgets")
    s.add_argument("--phi1", type=float, default=1.2)
    s.add_argument("--phi2", type=float, default=1.0)
    s.add_argument("--x1-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"))
    s.add_argument("--x2-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"))
    s.add_argument("--step", type=float, default=0.02)
    s.add_argument("--gb-grid", type=int, default=20_001)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--svg")
    s.set_defaults(func=cmd_scan)

    w = sub.add_parser("sweep", help="payoff changes along valuation transfers")
    w.add_argument("game", nargs=4, type=float, help="PHI1 PHI2 X1 X2")
    w.add_argument("--tau", type=float, nargs=2, metavar=("LO", "HI"))
    w.add_argument("--n", type=int, default=2_201)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_sweep)

    m = sub.add_parser("mc", help="random budgets, valuation-transfer membership")
    m.add_argument("--phi1", type=float, default=1.2)
    m.add_argument("--phi2", type=float, default=1.0)
    m.add_argument("--samples", type=int, default=1_000)
    m.add_argument("--seed", type=int, default=42)
    m.add_argument("--x-range", type=float, nargs=2, default=(0.0, 3.0), metavar=("LO", "HI"))
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--out", required=True)
    m.add_argument("--svg")
    m.set_defaults(func=cmd_mc)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    if getattr(ns, "gb_grid", 1_001) < 1_001:
        print("error: --gb-grid must be at least 1001", file=sys.stderr)
        return EXIT_USAGE
    try:
        return ns.func(ns)
    except (ModelError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
