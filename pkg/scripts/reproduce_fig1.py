#!/usr/bin/env python3
"""Transit velocity vs barrier width for several V0/E_M ratios.

Writes results/fig1.csv plus a companion gnuplot script.
"""

import sys
from pathlib import Path

from tunneltime.cli import main

if __name__ == "__main__":
    Path("results").mkdir(exist_ok=True)
    raise SystemExit(
        main(["fig1", "--out", "results/fig1.csv", "--plot-script", *sys.argv[1:]])
    )
