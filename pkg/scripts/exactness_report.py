#!/usr/bin/env python3
"""Exactness verdicts for every registry curve, with witnesses and timing.

Usage: python3 scripts/exactness_report.py [curve ...]
"""

import sys
import time

from quartichull import curves, exactness
from quartichull.poly import format_poly


def main():
    names = sys.argv[1:] or curves.curve_names()
    for name in names:
        record = curves.lookup(name)
        t0 = time.time()
        verdict = exactness.sweep_exactness(record.implicit, n=360)
        dt = time.time() - t0
        mark = "" if verdict.verdict == record.expected_verdict else "  <-- unexpected"
        print(f"{name:14s} {verdict.verdict:12s} ({dt:5.1f}s){mark}")
        if verdict.witness is not None:
            w = verdict.witness.normalized()
            print(f"{'':14s} witness: {format_poly(w.affine_poly())}")
        for s in verdict.singular_points:
            loc = ", ".join(f"{v:.6g}" for v in s.location.normalized().coords)
            print(f"{'':14s} singular point ({loc}) [{s.classification}]")


if __name__ == "__main__":
    main()
