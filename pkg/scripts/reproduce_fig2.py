#!/usr/bin/env python3
"""Stationary-phase, moment-based and numerical phase times vs sqrt(V0/E_M).

Fixed width k_M L = 100.  Writes results/fig2.csv plus a gnuplot script.
"""

import sys
from pathlib import Path

from tunneltime.cli import main

if __name__ == "__main__":
    Path("results").mkdir(exist_ok=True)
    raise SystemExit(
        main(["fig2", "--out", "results/fig2.csv", "--plot-script", *sys.argv[1:]])
    )
