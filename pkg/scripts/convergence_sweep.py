#!/usr/bin/env python3
"""Mode-convergence study against a fixed finite-difference reference.

Solves a smooth delayed-reaction fixture (sine coefficients decay like
0.5^(n-1)) at a ladder of mode counts, compares each spectral field to one
finite-difference reference computed once, and prints a table of sup / L2
gaps and wall times.  The same flow is available as ``delayheat sweep``;
this script exercises the library API directly and is handy for profiling.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from delayheat import (
    DelayHeatProblem,
    EigenBasis,
    FdConfig,
    GridSpec,
    fd_solve_delay,
    field_difference_report,
    parse_function,
    solve_delay,
)


def geometric_fixture(kappa: float, tau: float, horizon: float) -> DelayHeatProblem:
    """Delayed-reaction problem whose initial profile has coefficients kappa**(n-1)."""
    length = float(np.pi)
    consts = {"l": length, "tau": tau}
    denom = f"({1.0 + kappa * kappa} - {2.0 * kappa}*cos(x))"
    return DelayHeatProblem(
        a1=1.0,
        a2=0.0,
        b1=0.0,
        b2=0.0,
        d1=0.0,
        d2=-0.4,
        tau=tau,
        length=length,
        horizon=horizon,
        g=parse_function("0", **consts),
        psi=parse_function(f"sin(x)/{denom}", **consts),
        theta1=parse_function("0", **consts),
        theta2=parse_function("0", **consts),
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", type=float, default=0.5,
                    help="coefficient ratio of the initial profile (default 0.5)")
    ap.add_argument("--tau", type=float, default=0.5, help="delay (default 0.5)")
    ap.add_argument("--horizon", type=float, default=1.0,
                    help="final time (default 1.0)")
    ap.add_argument("--modes", type=str, default="4,8,16,32,64",
                    help="comma-separated mode counts (default 4,8,16,32,64)")
    ap.add_argument("--nx", type=int, default=600,
                    help="reference grid: interior-inclusive x points (default 600)")
    ap.add_argument("--nt-per-tau", type=int, default=128,
                    help="reference grid: time steps per delay (default 128)")
    ap.add_argument("--out-csv", type=str, default=None,
                    help="optional path for the result table as CSV")
    ap.add_argument("--out-json", type=str, default=None,
                    help="optional path for the result table as JSON")
    args = ap.parse_args(argv)

    mode_counts = [int(tok) for tok in args.modes.split(",") if tok.strip()]
    if not mode_counts:
        ap.error("--modes must name at least one mode count")
    if not 0.0 < args.kappa < 1.0:
        ap.error("--kappa must lie in (0, 1) for a smooth profile")

    problem = geometric_fixture(args.kappa, args.tau, args.horizon)
    grid = GridSpec(nx=args.nx, nt_per_tau=args.nt_per_tau)

    t0 = time.perf_counter()
    reference = fd_solve_delay(
        problem, FdConfig(nx=args.nx, nt_per_tau=args.nt_per_tau)
    )
    fd_seconds = time.perf_counter() - t0
    print(f"reference: finite differences, nx={args.nx} nt_per_tau={args.nt_per_tau} "
          f"({fd_seconds:.2f} s)")
    print(f"{'modes':>6}  {'sup diff':>12}  {'L2 diff':>12}  {'seconds':>8}")

    rows = []
    for n_modes in mode_counts:
        t0 = time.perf_counter()
        spectral = solve_delay(problem, EigenBasis(problem.length, n_modes), grid=grid)
        seconds = time.perf_counter() - t0
        report = field_difference_report(spectral, reference)
        rows.append(
            {
                "modes": n_modes,
                "sup_diff": report["sup"],
                "l2_diff": report["l2"],
                "wall_time_s": seconds,
            }
        )
        print(f"{n_modes:>6}  {report['sup']:>12.4e}  {report['l2']:>12.4e}"
              f"  {seconds:>8.2f}")

    sups = [row["sup_diff"] for row in rows]
    within_band = all(sups[i + 1] <= 1.1 * sups[i] for i in range(len(sups) - 1))
    print(f"non-increasing within a 10% band: {within_band}")

    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["modes", "sup_diff", "l2_diff", "wall_time_s"]
            )
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.out_csv}")
    if args.out_json:
        payload = {
            "kappa": args.kappa,
            "tau": args.tau,
            "horizon": args.horizon,
            "reference": {"nx": args.nx, "nt_per_tau": args.nt_per_tau},
            "rows": rows,
            "non_increasing_within_band": within_band,
        }
        with open(args.out_json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.out_json}")

    return 0 if within_band else 1


if __name__ == "__main__":
    sys.exit(main())
