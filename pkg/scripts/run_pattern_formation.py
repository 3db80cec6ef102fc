#!/usr/bin/env python3
"""Run a figure-preset pattern-formation simulation and dump CSV artifacts.

Usage: run_pattern_formation.py [PRESET] [OUTDIR]
Defaults: preset fig2a, output ./out/PRESET.
"""

import sys

from mechanosim.cli import main

if __name__ == "__main__":
    preset = sys.argv[1] if len(sys.argv) > 1 else "fig2a"
    out = sys.argv[2] if len(sys.argv) > 2 else f"out/{preset}"
    raise SystemExit(main(["simulate", "--preset", preset, "--out", out]))
