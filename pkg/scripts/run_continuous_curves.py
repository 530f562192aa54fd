#!/usr/bin/env python3
"""Reproduce the switched-line concurrence curves for both channel families.

Writes per-curve CSVs plus manifests under results/continuous/<family>/ and
prints every breaking length.  The slice lengths of the switched lines are
carved from the single-channel threshold computed in the same run, so the
outputs are self-consistent rather than tied to any rounded readout.
"""

import pathlib
import sys

from entweave.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent / "results" / "continuous"


def run() -> int:
    rc = 0
    for family in ("ad", "pd"):
        out = ROOT / family
        print(f"== {family} family -> {out}")
        rc |= main(["--out", str(out), "continuous", "--family", family,
                    "--omega", "1.5", "--eps", "1.0",
                    "--n", "1", "2", "4", "8", "16",
                    "--x-max", "6.0", "--steps", "241"])
    # undriven comparison point: the pure families never break
    out = ROOT / "undriven"
    print(f"== undriven limit -> {out}")
    rc |= main(["--out", str(out), "continuous", "--family", "ad",
                "--omega", "0.0", "--x-max", "6.0", "--steps", "241"])
    return rc


if __name__ == "__main__":
    sys.exit(run())
