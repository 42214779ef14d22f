"""Command-line front end.

Exit codes: 0 success (verdict isomorphism or surjective-only), 2 invalid
input, 3 quiver invariant violated, 4 inconclusive verification, 5 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile

from .algebra.groebner import Budget, BudgetExceeded
from .algebra.parser import PolynomialSyntaxError
from .presentation import Collection, PresentationError, load_document
from .quiver import QuiverInvariantError, bq_generator_count, bq_ideal, build_quiver, to_dot, to_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_QUIVER = 3
EXIT_INCONCLUSIVE = 4
EXIT_BUDGET = 5


class InputError(Exception):
    pass


def write_atomic(path: str, text: str):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(args, obj):
    text = dump_json(obj)
    if args.report:
        write_atomic(args.report, text)
    else:
        sys.stdout.write(text)


def _load(args, need_collection=True):
    try:
        doc = load_document(args.input)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    if need_collection and doc.collection is None:
        raise InputError("the input document has no 'collection'")
    return doc


def _budget(args) -> Budget:
    return Budget(seconds=args.budget_secs)


# commands ----------------------------------------------------------------------------------


def cmd_sections(args) -> int:
    from .sections import global_sections, graded_piece

    doc = _load(args)
    p = doc.presentation
    out = []
    for i, c in enumerate(doc.collection.classes):
        secs = global_sections(p, c)
        out.append({
            "index": i,
            "class": list(c),
            "sections": len(secs),
            "graded_piece_dim": graded_piece(p, c).dim,
            "monomials": secs.strings(p),
        })
    emit(args, {"classes": out})
    return EXIT_OK


def cmd_quiver(args) -> int:
    doc = _load(args)
    q = build_quiver(doc.presentation, doc.collection)
    if args.emit_dot:
        write_atomic(args.emit_dot, to_dot(q))
    emit(args, to_json(q))
    return EXIT_OK


def cmd_ideal(args) -> int:
    from . import pipeline as pl

    doc = _load(args)
    q = build_quiver(doc.presentation, doc.collection)
    budget = _budget(args)
    order = pl.report_order(q, args.order)
    kind = args.which
    with budget.during(kind):
        if kind == "bq":
            n = bq_generator_count(q)
            rec = {"components": [[q.arrows[k].name for k in comp] for comp in pl.bq_components(q)],
                   "generator_count": n}
            if n <= 5000:
                rec["generators"] = bq_ideal(q).generator_strings()
            emit(args, rec)
            return EXIT_OK
        if kind == "iq":
            I = pl.iq_ideal(q, budget)
        elif kind == "il":
            I = pl.il_ideal(q, pl.Strategy.parse(args.strategy), budget)
        elif kind == "iqtilde":
            I = pl.iqtilde_ideal(q, budget)
        else:
            I = pl.iltilde_ideal(q)
        rec = pl._ideal_record(I, order, budget)
    rec["ideal"] = kind
    emit(args, rec)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import pipeline as pl

    doc = _load(args)
    opts = pl.VerifyOptions(
        strategy=pl.Strategy.parse(args.strategy),
        order=args.order,
        budget_secs=args.budget_secs,
        check_bpf=args.check_bpf,
        assert_very_ample=args.assert_very_ample,
    )
    if args.emit_dot:
        q = build_quiver(doc.presentation, doc.collection)
        write_atomic(args.emit_dot, to_dot(q))
    report = pl.verify(doc.presentation, doc.collection, opts)
    emit(args, report.to_dict(timings=args.timings))
    for line in report.warnings:
        print(f"warning: {line}", file=sys.stderr)
    print(f"verdict: {report.verdict}", file=sys.stderr)
    return pl.exit_code(report)


def cmd_build_collection(args) -> int:
    from .pipeline import build_collection

    doc = _load(args, need_collection=False)
    try:
        base = json.loads(args.base)
        betas = json.loads(args.betas)
    except json.JSONDecodeError as exc:
        raise InputError(f"--base and --betas must be JSON lists: {exc.msg}") from None
    if not isinstance(base, list) or not isinstance(betas, list):
        raise InputError("--base and --betas must be JSON lists")
    base = [c if isinstance(c, list) else [c] for c in base]
    coll: Collection = build_collection(doc.presentation, base, betas)
    emit(args, {"collection": [list(c) for c in coll.classes]})
    return EXIT_OK


COMMANDS = {
    "sections": cmd_sections,
    "quiver": cmd_quiver,
    "ideal": cmd_ideal,
    "verify": cmd_verify,
    "build-collection": cmd_build_collection,
}


def positive_float(text):
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdsquiver", description="Quivers of sections and reconstruction checks.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log stage progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, strategy=False, order=False):
        sp.add_argument("--input", required=True, help="input JSON document")
        sp.add_argument("--report", help="write JSON output here instead of stdout")
        sp.add_argument("--budget-secs", type=positive_float, default=None)
        if strategy:
            sp.add_argument("--strategy", default="strict", help="strict or weighted:D")
        if order:
            sp.add_argument("--order", default=None, help="order for reported bases: wdegrevlex, degrevlex, lex")

    common(sub.add_parser("sections", help="sections and graded-piece dimensions per class"))
    sp = sub.add_parser("quiver", help="quiver of sections as JSON")
    common(sp)
    sp.add_argument("--emit-dot", help="write a DOT rendering here")
    sp = sub.add_parser("ideal", help="one of the ideals")
    sp.add_argument("which", choices=["iq", "il", "iqtilde", "iltilde", "bq"])
    common(sp, strategy=True, order=True)
    sp = sub.add_parser("verify", help="full reconstruction check")
    common(sp, strategy=True, order=True)
    sp.add_argument("--emit-dot")
    sp.add_argument("--check-bpf", action="store_true", help="check basepoint-freeness of every class")
    sp.add_argument("--assert-very-ample", action="store_true",
                    help="assert that the collection separates points (needed for the isomorphism verdict)")
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sp = sub.add_parser("build-collection", help="collection (0, c_1.., dE, 2dE)")
    common(sp)
    sp.add_argument("--base", required=True, help="JSON list of classes")
    sp.add_argument("--betas", required=True, help="JSON list of multiplicities")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (InputError, PresentationError, PolynomialSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:  # bad strategy or order names
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QuiverInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUIVER
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
