#!/usr/bin/env python3
"""Run every figure scenario with its defaults and optionally render plots.

Usage: python scripts/run_paper_figures.py [--out runs] [--only fig2-entanglement ...]
Heavy scenarios (fig2, figS2, fig4, figS4) take minutes each at L = 16.
"""

import argparse
import shutil
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from driven_pxp.config import SCENARIOS, config_from_dict  # noqa: E402
from driven_pxp.scenarios import run_scenario  # noqa: E402


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="runs")
    parser.add_argument("--only", nargs="*", default=None)
    parser.add_argument("--render", action="store_true",
                        help="call pxp-render on each finished run directory")
    args = parser.parse_args()

    targets = args.only or list(SCENARIOS)
    for name in targets:
        cfg = config_from_dict({"scenario": name})
        started = time.time()
        out = run_scenario(cfg, output_root=args.out)
        print(f"{name}: {out} [{time.time() - started:.1f}s]")
        if args.render:
            if shutil.which("pxp-render") is None:
                print("  (pxp-render not installed, skipping figure)")
            else:
                subprocess.run(["pxp-render", str(out)], check=True)


if __name__ == "__main__":
    main()
