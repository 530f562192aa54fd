#!/usr/bin/env python3
"""Reproduce every interferometer-bench sweep, ideal and measured elements.

Writes sweep CSVs plus manifests under results/experiment/<preset>/ and
prints the peak/zero summaries.  The restored sequence is swept in theta
with phi held at pi/4; the two halved sequences are swept in their own
plate angle.
"""

import pathlib
import sys

from entweave.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent / "results" / "experiment"

SWEEPS = [
    ("mprime", "theta"),
    ("m1", "theta"),
    ("m2", "phi"),
    ("identity", "theta"),
]


def run() -> int:
    rc = 0
    for preset in ("ideal", "measured"):
        for map_name, vary in SWEEPS:
            out = ROOT / preset
            print(f"== {map_name} ({preset}), vary {vary} -> {out}")
            rc |= main(["--out", str(out), "experiment",
                        "--map", map_name, "--preset", preset,
                        "--vary", vary, "--steps", "361"])
    return rc


if __name__ == "__main__":
    sys.exit(run())
