"""Grow the linear-cost tree-pair family and tabulate cost/m and realised rho.

Each depth builds the instance with rho at rho_max (or ``--rho``) and, unless
``--no-dilute``, a path long enough for the cheap prefix to reach depth d1
at the largest depth.  Prints one line per depth and optionally writes the
table as CSV.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from bidiexp.adversarial import AdversarialSpec, generate, min_path_factor, verify_profile
from bidiexp.harness import estimated_exponent, measure_pair
from bidiexp.report import emit_csv

COLUMNS = ("d", "n", "m", "cost", "cost_over_m", "exponent", "realized_rho", "target_rho", "verified", "seconds")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.3)
    ap.add_argument("--b", type=float, default=2.0)
    ap.add_argument("--bplus", type=float, default=4.0)
    ap.add_argument("--rho", type=float, help="target ratio (default rho_max)")
    ap.add_argument("--depths", type=int, nargs="+", default=[6, 8, 10, 12])
    ap.add_argument("--no-dilute", action="store_true")
    ap.add_argument("--budget", type=int, default=10**8)
    ap.add_argument("--out", type=Path, help="CSV output")
    args = ap.parse_args()

    base = dict(alpha=args.alpha, b=args.b, b_plus=args.bplus, budget=args.budget)
    rho = args.rho if args.rho is not None else AdversarialSpec(rho=0.0, d=max(args.depths), **base).rho_max
    dilute = not args.no_dilute
    factor = min_path_factor(AdversarialSpec(rho=rho, d=max(args.depths), **base)) if dilute else 0.0
    print(f"rho target {rho:.4f}, dilution factor {factor:.3f}")

    rows = []
    for d in args.depths:
        t0 = time.perf_counter()
        inst = generate(AdversarialSpec(rho=rho, d=d, append_path=dilute, path_factor=factor, **base))
        cost, _ = measure_pair(inst.graph, inst.s, inst.t)
        row = {
            "d": d,
            "n": inst.graph.n,
            "m": inst.graph.m,
            "cost": cost,
            "cost_over_m": cost / inst.graph.m,
            "exponent": estimated_exponent(cost, inst.graph.m),
            "realized_rho": inst.realized_rho(),
            "target_rho": rho,
            "verified": verify_profile(inst).passed,
            "seconds": round(time.perf_counter() - t0, 2),
        }
        rows.append(row)
        print("  ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        emit_csv(rows, args.out, columns=COLUMNS, sort_key=None)


if __name__ == "__main__":
    main()
