#!/usr/bin/env python3
"""Barrier-width sweep at E_M = V0: peak times, transit velocities, ratios.

Writes results/table1.csv; pass extra CLI flags to override defaults.
"""

import sys
from pathlib import Path

from tunneltime.cli import main

if __name__ == "__main__":
    Path("results").mkdir(exist_ok=True)
    raise SystemExit(main(["table1", "--out", "results/table1.csv", *sys.argv[1:]]))
