"""Command-line entry point: ``reflexmod <verb> ...``.

Exit status: 0 when every report is consistent, 1 on a consistency
violation, 2 on an input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import OperatorSpace
from .docs import DocumentError, Workspace, parse_workspace, to_jsonable
from .generators import HOM_STYLES, LATTICE_STYLES, random_instance
from .lattice import DEFAULT_CAP
from .linalg import Subspace
from .scalars import FIELDS, format_scalar
from .suite import CHECKS, CheckReport, RunOptions, exit_status, run_suite

VERB_CHECKS = {
    "closure": "closure",
    "alg": "alg",
    "maps": "maps",
    "module": "module",
    "rankone": "lat-rankone",
    "audit": "audit",
}

EXIT_INPUT = 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="override the document seeds")
    p.add_argument("--trials", type=int, default=200, help="audit trials (default 200)")
    p.add_argument("--samples", type=int, default=25, help="random samples per sampled check (default 25)")
    p.add_argument("--cap", type=int, default=None, help=f"closure element cap (default {DEFAULT_CAP})")
    p.add_argument("--field", choices=FIELDS, default=None, help="override the document field")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("text", "record"), default="text")
    p.add_argument("--runtime", action="store_true", help="include runtimes in records")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reflexmod", description="Exact checks for modules over subspace lattices")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="parse and validate a document")
    p.add_argument("doc")
    _common(p)
    for verb, cid in VERB_CHECKS.items():
        p = sub.add_parser(verb, help=f"run the {cid} check")
        p.add_argument("doc")
        _common(p)
    p = sub.add_parser("check", help="run one check by id")
    p.add_argument("id", help="one of: " + ", ".join(CHECKS))
    p.add_argument("doc")
    _common(p)
    p = sub.add_parser("suite", help="run several checks in order")
    p.add_argument("doc")
    p.add_argument("--checks", default=None, help="comma-separated check ids (default: all)")
    _common(p)
    p = sub.add_parser("random", help="emit a random workspace document")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--size", type=int, default=4, help="target carrier size")
    p.add_argument("--style", choices=LATTICE_STYLES, default="random")
    p.add_argument("--hom-style", choices=HOM_STYLES, default="random")
    p.add_argument("--homs", type=int, default=1)
    _common(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> Workspace:
    try:
        with open(args.doc, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    except OSError as exc:
        raise DocumentError(args.doc, exc.strerror or str(exc)) from None
    if args.field is not None and isinstance(doc, dict):
        doc["field"] = args.field
    return parse_workspace(doc, args.cap)


def _show(ws: Workspace, v) -> str:
    if isinstance(v, Subspace):
        name = ws.name_of(v)
        if name is not None:
            return name
        if v.is_zero():
            return "0"
        return "<" + ", ".join("(" + ",".join(format_scalar(x) for x in b) + ")" for b in v.basis) + ">"
    if isinstance(v, OperatorSpace):
        mats = ["[" + "; ".join(" ".join(format_scalar(x) for x in row) for row in m) + "]" for m in v.matrices]
        return "span{" + ", ".join(mats) + "}"
    if isinstance(v, (list, tuple)):
        return "{" + ", ".join(_show(ws, x) for x in v) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return json.dumps(to_jsonable(v), sort_keys=True)
    return str(v)


def render_text(ws: Workspace, reports: list[CheckReport]) -> str:
    lines = []
    for r in reports:
        verdict = _show(ws, r.verdict)
        lines.append(f"== {r.check}  consistency={r.consistency}  verdict={verdict}  digest={r.digest}")
        if r.audit is not None:
            a = r.audit
            extra = f"  counterexample={a['counterexample']}" if "counterexample" in a else ""
            lines.append(f"   audit: {a['verdict']} (trials={a['trials']}, seed={a['seed']}){extra}")
        for note in r.notes:
            lines.append(f"   note: {note}")
        for tname, rows in r.tables.items():
            lines.append(f"-- {tname}")
            if not rows:
                lines.append("   (empty)")
                continue
            cols = list(rows[0].keys())
            cells = [[_show(ws, row.get(c)) for c in cols] for row in rows]
            widths = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(cols)]
            lines.append("   " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
            for x in cells:
                lines.append("   " + "  ".join(v.ljust(w) for v, w in zip(x, widths)).rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def render_record(reports: list[CheckReport], include_runtime: bool = False) -> str:
    return json.dumps([r.to_record(include_runtime) for r in reports], indent=2, sort_keys=True) + "\n"


def _validate(ws: Workspace, args) -> int:
    summary = {
        "field": ws.field,
        "dim": ws.n,
        "carrier": [ws.name_of(e) for e in ws.lattice],
        "homs": sorted(ws.homs),
        "modules": {k: {"side": s, "hom": h} for k, (s, h) in ws.modules.items()},
    }
    if args.format == "record":
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(f"ok: field {ws.field}, dim {ws.n}, {len(ws.lattice)} carrier elements, "
              f"{len(ws.homs)} homs, {len(ws.modules)} modules\n", args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trials < 1 or args.samples < 1:
        print("error: --trials and --samples must be positive", file=sys.stderr)
        return EXIT_INPUT

    if args.verb == "random":
        try:
            doc = random_instance(args.dim, args.size, args.hom_style, args.seed or 0, args.style, args.homs)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if args.field is not None:
            doc["field"] = args.field
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return 0

    try:
        ws = _load(args)
    except DocumentError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.verb == "validate":
        return _validate(ws, args)
    if args.verb == "check":
        checks = [args.id]
    elif args.verb == "suite":
        checks = list(CHECKS) if args.checks is None else [c for c in args.checks.split(",") if c]
    else:
        checks = [VERB_CHECKS[args.verb]]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        print(f"input error: unknown check id {unknown[0]!r}; known: {', '.join(CHECKS)}", file=sys.stderr)
        return EXIT_INPUT

    reports = run_suite(ws, checks, RunOptions(args.seed, args.trials, args.samples))
    if args.format == "record":
        _emit(render_record(reports, args.runtime), args.out)
    else:
        _emit(render_text(ws, reports), args.out)
    for r in reports:
        if r.consistency != "ok":
            print(f"violation in {r.check}: {'; '.join(r.notes)}", file=sys.stderr)
    if any(r.audit is not None and r.audit["verdict"] != "verified_up_to_sampling" for r in reports):
        print("warning: carrier failed the reflexivity audit", file=sys.stderr)
    return exit_status(reports)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
