"""Sizes of the quiver ideals of each fixture, with the time each one takes.

The X5 toric ideal takes a few minutes, so X5 stops after I_L unless --all is given.
"""

import argparse
import time
from pathlib import Path

from mdsquiver.pipeline import il_ideal, iltilde_ideal, iq_ideal, iqtilde_ideal
from mdsquiver.presentation import load_document
from mdsquiver.quiver import bq_generator_count, build_quiver

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def timed(fn, *args):
    t0 = time.monotonic()
    out = fn(*args)
    return out, time.monotonic() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--all", action="store_true", help="include I_Q and I_Q~ of X5 (a few minutes)")
    args = ap.parse_args()
    for name in ("gr24", "x4", "x5"):
        doc = load_document(FIXTURES / f"{name}.json")
        q = build_quiver(doc.presentation, doc.collection)
        print(f"{name}: {q.num_vertices} vertices, {len(q.arrows)} arrows, "
              f"B_Q has {bq_generator_count(q)} generators")
        jobs = [("I_L~", iltilde_ideal, q), ("I_L strict", il_ideal, q, "strict")]
        if name != "x5" or args.all:
            jobs += [("I_Q~", iqtilde_ideal, q), ("I_Q", iq_ideal, q)]
        for label, fn, *rest in jobs:
            ideal, secs = timed(fn, *rest)
            print(f"  {label:<11} {len(ideal.gens):6d} generators  {secs:8.2f}s")


if __name__ == "__main__":
    main()
