"""Run the full verification on a bundled fixture and print a short summary.

    python scripts/run_fixture.py gr24
    python scripts/run_fixture.py x4 --strategy weighted:3
    python scripts/run_fixture.py x5 --strategy weighted:3 --report x5.json
"""

import argparse
import json
import logging
import time
from pathlib import Path

from mdsquiver.pipeline import Strategy, VerifyOptions, verify
from mdsquiver.presentation import load_document

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("name", help="fixture name (gr24, x4, x5) or a path to a JSON document")
    ap.add_argument("--strategy", default="strict")
    ap.add_argument("--budget-secs", type=float, default=None)
    ap.add_argument("--report", help="write the full report here")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    path = Path(args.name)
    if not path.exists():
        path = FIXTURES / f"{args.name}.json"
    doc = load_document(path)
    opts = VerifyOptions(strategy=Strategy.parse(args.strategy), budget_secs=args.budget_secs,
                         assert_very_ample=True)
    t0 = time.monotonic()
    rep = verify(doc.presentation, doc.collection, opts)
    d = rep.to_dict(timings=True)
    print(f"verdict: {d['verdict']} (failed stage: {d['failed_stage']}) in {time.monotonic() - t0:.1f}s")
    for stage, secs in d["timings"].items():
        print(f"  {stage:<22} {secs:8.2f}s")
    for key, ideal in d["ideals"].items():
        sizes = [f"{len(ideal[k])} {k}" for k in ("generators", "basis") if k in ideal]
        if "generator_count" in ideal and "generators" not in ideal:
            sizes.append(f"{ideal['generator_count']} generators")
        print(f"  {key:<8} {', '.join(sizes)}")
    for w in d["warnings"]:
        print(f"warning: {w}")
    if args.report:
        Path(args.report).write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
