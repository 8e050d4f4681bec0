"""Command line front end.

Exit status: 0 when an analysis completes (Unknown verdicts included),
1 on usage or parse errors, 2 when an internal invariant is violated.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize as S
from .farley import build_ball
from .freeness import freeness_verdict
from .pathology import (
    InvariantViolation,
    self_intersection_search,
    specialness_criterion,
    two_sidedness_check,
)
from .presentation import PresentationError, parse_presentation
from .squier import (
    build_component,
    euler_characteristic,
    first_betti_number,
    pi1_presentation,
    simplify_presentation,
)
from .verdict import DEFAULT_BUDGET, Budget

VERBS = ("explore", "pi1", "farley-ball", "pathology", "freeness", "verify-witness")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diagram-groups", description="Diagram group workbench.")
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("witness", nargs="?", help="witness or report file (verify-witness)")
    ap.add_argument("--presentation", help="presentation file")
    ap.add_argument("--word", help="base word")
    ap.add_argument("--radius", type=int, default=2)
    ap.add_argument("--max-words", type=int, default=DEFAULT_BUDGET.max_words)
    ap.add_argument("--max-cells", type=int, default=DEFAULT_BUDGET.max_cells)
    ap.add_argument("--max-word-length", type=int, default=DEFAULT_BUDGET.max_word_length)
    ap.add_argument("--max-depth", type=int, default=DEFAULT_BUDGET.max_depth)
    ap.add_argument("--json", action="store_true", help="emit JSON instead of text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def _load(args):
    if not args.presentation:
        raise UsageError(f"{args.verb} needs --presentation")
    if not args.word:
        raise UsageError(f"{args.verb} needs --word")
    try:
        with open(args.presentation, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read presentation: {exc}") from None
    p = parse_presentation(text)
    w = p.word(args.word)
    if not w:
        raise UsageError("base word must be non-empty")
    return p, w


def _budget(args) -> Budget:
    try:
        return Budget(args.max_word_length, args.max_words, args.max_cells, args.max_depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- verbs -----------------------------------------------------------------


def cmd_explore(args):
    p, w = _load(args)
    c = build_component(p, w, _budget(args))
    doc = S.component_json(c)
    text = [
        f"component of {p.format_word(w)}: {'complete' if c.complete else 'truncated'}",
        "cells: " + ", ".join(f"{d}-cubes {c.count(d)}" for d in range(c.dimension + 1)),
        f"euler characteristic: {euler_characteristic(c)}",
        f"b1: {first_betti_number(c)}",
    ]
    return doc, text


def cmd_pi1(args):
    p, w = _load(args)
    b = _budget(args)
    c = build_component(p, w, b, max_dim=2)
    g = pi1_presentation(c, w)
    s = simplify_presentation(g, b)
    names = {k: f"x{i}" for i, k in enumerate(g.generators)}

    def rel_json(r):
        return [[names[k], e] for k, e in r]

    doc = {
        "schema": f"pi1/{S.SCHEMA_VERSION}",
        "presentation": p.to_text(),
        "base": p.format_word(w),
        "complete": c.complete,
        "generators": [{"name": names[k], "edge": S.cube_json(p, k)} for k in g.generators],
        "relators": [rel_json(r) for r in g.relators],
        "simplified": {
            "generators": [names[k] for k in s.generators],
            "relators": [rel_json(r) for r in s.relators],
            "trivial": s.is_trivial,
        },
        "abelian_rank": g.abelian_rank(),
        "betti_1": first_betti_number(c),
    }

    def fmt(gens, rels):
        body = ", ".join(" ".join(n + ("" if e > 0 else "^-1") for n, e in rel_json(r)) for r in rels)
        return "< " + ", ".join(names[k] for k in gens) + " | " + body + " >"

    text = [
        f"pi1 at {p.format_word(w)} ({'complete' if c.complete else 'truncated'} component)",
        f"spanning-tree presentation: {len(g.generators)} generators, {len(g.relators)} relators",
        "simplified: " + fmt(s.generators, s.relators),
        f"abelian rank: {g.abelian_rank()}",
    ]
    return doc, text


def cmd_farley_ball(args):
    p, w = _load(args)
    if args.radius < 0:
        raise UsageError("--radius must be non-negative")
    ball = build_ball(p, w, args.radius)
    doc = S.ball_json(ball)
    text = [
        f"ball of radius {args.radius} around ε({p.format_word(w)})",
        f"vertices: {len(ball.vertices)}, edges: {len(ball.edges)}, cubes of dimension >= 2: {len(ball.cubes)}",
    ]
    return doc, text


def cmd_pathology(args):
    p, w = _load(args)
    b = _budget(args)
    c = build_component(p, w, b)
    sides = two_sidedness_check(c)
    selfx = self_intersection_search(p, c, b)
    special = specialness_criterion(p, w, b)
    witnesses = []
    if selfx.proved:
        witnesses.append(S.self_intersection_json(p, selfx.certificate))
    doc = {
        "schema": f"pathology/{S.SCHEMA_VERSION}",
        "presentation": p.to_text(),
        "base": p.format_word(w),
        "complete": c.complete,
        "two_sided": {"status": sides.status.value, **sides.certificate},
        "self_intersection": selfx.status.value,
        "specialness_criterion": special.status.value,
        "witnesses": witnesses,
    }
    if special.notes.get("violating_triple"):
        a, bb, pw = special.notes["violating_triple"]
        doc["violating_triple"] = [p.format_word(x) for x in (a, bb, pw)]
    text = [
        f"pathologies of S(P, {p.format_word(w)}) ({'complete' if c.complete else 'truncated'})",
        f"every hyperplane 2-sided: {sides.status.value} ({sides.certificate['hyperplanes']} hyperplanes)",
        f"self-intersecting hyperplane: {selfx.status.value}",
        f"specialness criterion: {special.status.value}",
    ]
    if "violating_triple" in doc:
        text.append("violating triple (a, b, p): " + ", ".join(doc["violating_triple"]))
    return doc, text


def cmd_freeness(args):
    p, w = _load(args)
    r = freeness_verdict(p, w, _budget(args))
    witnesses = []
    if r.z2_witness is not None:
        witnesses.append(S.z2_witness_json(p, r.z2_witness))
    doc = {
        "schema": f"freeness-report/{S.SCHEMA_VERSION}",
        "presentation": p.to_text(),
        "base": p.format_word(w),
        "verdict": r.verdict,
        "dimension_lower_bound": r.dimension_lower_bound,
        "dimension_one_evidence": r.dimension_one_evidence,
        "rank_estimate": r.rank_estimate,
        "class_complete": r.class_complete,
        "class_size": r.class_size,
        "members_surveyed": r.members_surveyed,
        "splits_checked": r.splits_checked,
        "truncation_table": [
            dict(zip(("max_word_length", "vertices", "edges", "squares", "betti_1"), row))
            for row in r.truncation_table
        ],
        "notes": r.notes,
        "witnesses": witnesses,
        "replay": "diagram-groups verify-witness <this file>",
    }
    if r.verdict == "Unknown" and r.dimension_one_evidence:
        headline = "dimension-1 evidence, Unknown (infinite class)" if not r.class_complete else \
            "dimension-1 evidence, Unknown (class not fully surveyed)"
    else:
        headline = r.verdict
    text = [
        f"D(P, {p.format_word(w)}): {headline}",
        f"algebraic dimension >= {r.dimension_lower_bound}",
        f"rank estimate: {r.rank_estimate}",
        f"class: {r.class_size} words ({'complete' if r.class_complete else 'truncated'}), "
        f"{r.members_surveyed} surveyed, {r.splits_checked} splits",
    ]
    for row in r.truncation_table:
        text.append("  length<={} V={} E={} S={} b1={}".format(*row))
    text.extend("note: " + n for n in r.notes)
    if r.z2_witness is not None:
        s = r.z2_witness.split
        text.append("ℤ² witness from split " + " · ".join(p.format_word(f) for f in s.factors)
                    + f" of {p.format_word(s.ambient)}")
    doc["headline"] = headline
    return doc, text


def cmd_verify(args):
    if not args.witness:
        raise UsageError("verify-witness needs a file argument")
    try:
        with open(args.witness, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read witness file: {exc}") from None
    problems = S.check_document(doc)
    n = len(doc.get("witnesses", [doc] if "type" in doc else []))
    out = {"verified": not problems, "witnesses": n, "problems": problems}
    text = [f"{n} witness(es): " + ("all replayed" if not problems else "FAILED")] + problems
    return out, text


HANDLERS = {
    "explore": cmd_explore,
    "pi1": cmd_pi1,
    "farley-ball": cmd_farley_ball,
    "pathology": cmd_pathology,
    "freeness": cmd_freeness,
    "verify-witness": cmd_verify,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        doc, text = HANDLERS[args.verb](args)
    except (UsageError, PresentationError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=stderr)
        return 2
    payload = S.dumps(doc) if args.json or args.out else "\n".join(text) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(S.dumps(doc))
        if not args.json:
            stdout.write("\n".join(text) + "\n")
        else:
            stdout.write(payload)
    else:
        stdout.write(payload)
    if args.verb == "verify-witness" and not doc["verified"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
