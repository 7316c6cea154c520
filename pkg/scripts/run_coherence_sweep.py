#!/usr/bin/env python3
"""Coherence-time landscape h*t_c over (tau, |epsilon|) for the hopping drive.

Usage: python scripts/run_coherence_sweep.py [--grid 8] [--L 16]
Roughly a minute per 64 cells at L = 16 once the PXP eigensystem is cached.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from driven_pxp.coherence import default_t_star, sweep_coherence  # noqa: E402


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--grid", type=int, default=8)
    parser.add_argument("--L", type=int, default=16)
    args = parser.parse_args()

    t0 = time.time()
    sweep = sweep_coherence(np.linspace(2.0, 6.0, args.grid),
                            np.linspace(0.1, 0.6, args.grid),
                            args.L, default_t_star(1.0))
    print(f"{args.grid}x{args.grid} sweep in {time.time() - t0:.1f}s, "
          f"{len(sweep['failures'])} failed fits")
    with np.printoptions(precision=2, linewidth=140):
        print("h*t_c (rows tau, cols |epsilon|):")
        print(sweep["h_t_c"])
    print("argmax:", sweep["argmax"])


if __name__ == "__main__":
    main()
