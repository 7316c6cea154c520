#!/usr/bin/env python3
"""Fine-grid Bethe-ansatz phase diagram: K, J/h and E over the density range.

Usage: python scripts/run_phase_diagram.py [--points 120] [--quad-n 128]
Prints the boundary checks and writes phase_diagram.csv via the CLI scenario.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from driven_pxp.bethe import chemical_potential, luttinger_K, solve_integral_equations  # noqa: E402
from driven_pxp.config import config_from_dict  # noqa: E402
from driven_pxp.scenarios import run_scenario  # noqa: E402


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=120)
    parser.add_argument("--quad-n", type=int, default=128)
    parser.add_argument("--out", default="runs")
    args = parser.parse_args()

    # cluster points near the endpoints and the branch crossover at 1/3
    lo = np.linspace(1e-3, 0.32, args.points // 2)
    hi = np.linspace(0.345, 0.4999, args.points - args.points // 2)
    grid = np.concatenate([lo, hi]).tolist()
    cfg = config_from_dict({
        "scenario": "fig3c-phase-diagram",
        "runtime": {"n0_grid": grid, "quad_n": args.quad_n},
    })
    out = run_scenario(cfg, output_root=args.out)
    print(f"table written to {out}")

    for n0, name, target in ((1e-3, "paramagnet", -3.0), (0.4999, "Z2", 6.0)):
        sol = solve_integral_equations(n0, quad_n=args.quad_n)
        print(f"n0={n0}: J/h = {chemical_potential(sol, 1.0):+.4f} "
              f"({name} boundary {target}), K = {luttinger_K(sol):.4f}")


if __name__ == "__main__":
    main()
