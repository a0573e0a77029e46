#!/usr/bin/env python3
"""Run the five comparison cells for one seed and print the goodput table.

Usage: python scripts/run_sweep.py [SEED] [OUTDIR]
"""

import sys

from afmtsim.cli import main

if __name__ == "__main__":
    seed = sys.argv[1] if len(sys.argv) > 1 else "1"
    outdir = sys.argv[2] if len(sys.argv) > 2 else "results"
    sys.exit(main(["sweep", "--seed", seed, "--out", outdir]))
