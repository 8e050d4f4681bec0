"""JSON forms of diagrams, complexes, reports and witnesses.

Every document that carries witnesses embeds the presentation text, so it
can be replayed without any other input. Words are written in the
presentation's own word syntax.
"""

from __future__ import annotations

import json

from .diagrams import Diagram, DiagramError, is_reduced
from .presentation import Presentation, RewriteEdge, parse_presentation
from .squier import SquierComponent, euler_characteristic, first_betti_number

SCHEMA_VERSION = 1


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _dir(forward: bool) -> str:
    return "forward" if forward else "backward"


def _fwd(text: str) -> bool:
    if text not in ("forward", "backward"):
        raise ValueError(f"bad direction {text!r}")
    return text == "forward"


def word_json(p: Presentation, w) -> str:
    return p.format_word(w)


def parse_word(p: Presentation, text: str):
    return p.word(text) if text else ()


# -- edges and derivations --------------------------------------------------


def edge_json(p: Presentation, e: RewriteEdge) -> dict:
    return {
        "left": p.format_word(e.left),
        "relation": e.relation.index,
        "direction": _dir(e.forward),
        "right": p.format_word(e.right),
    }


def edge_from_json(p: Presentation, doc: dict) -> RewriteEdge:
    return RewriteEdge(
        parse_word(p, doc["left"]), p.relations[doc["relation"]], _fwd(doc["direction"]),
        parse_word(p, doc["right"]),
    )


def derivation_json(p: Presentation, edges) -> list:
    return [edge_json(p, e) for e in edges]


def derivation_from_json(p: Presentation, doc: list) -> list:
    return [edge_from_json(p, e) for e in doc]


# -- diagrams ----------------------------------------------------------------


def diagram_json(d: Diagram) -> dict:
    p = d.presentation
    return {
        "top": p.format_word(d.top),
        "bottom": p.format_word(d.bottom),
        "cells": d.cell_count,
        "layers": [[[off, rel, _dir(fwd)] for off, rel, fwd in layer] for layer in d.layers],
    }


def diagram_from_json(p: Presentation, doc: dict) -> Diagram:
    top = parse_word(p, doc["top"])
    layers = tuple(tuple((int(o), int(r), _fwd(f)) for o, r, f in layer) for layer in doc["layers"])
    d = Diagram(p, top, layers)
    rebuilt = Diagram.from_steps(p, top, d.steps())
    if rebuilt != d:
        raise DiagramError("layers are not in canonical form")
    if "bottom" in doc and p.format_word(d.bottom) != doc["bottom"]:
        raise DiagramError("stored bottom word does not match the layers")
    return d


# -- complexes ----------------------------------------------------------------


def cube_json(p: Presentation, key) -> dict:
    contexts, rels = key
    return {"contexts": [p.format_word(c) for c in contexts], "relations": list(rels)}


def component_json(c: SquierComponent) -> dict:
    p = c.presentation
    return {
        "schema": f"squier-component/{SCHEMA_VERSION}",
        "presentation": p.to_text(),
        "base": p.format_word(c.base),
        "complete": c.complete,
        "counts": {str(d): c.count(d) for d in range(c.dimension + 1)},
        "euler_characteristic": euler_characteristic(c),
        "betti_1": first_betti_number(c),
        "budget_used": budget_json(c.budget_used),
        "vertices": [p.format_word(v) for v in c.vertices],
        "edges": [edge_json(p, e) for e in c.edges],
        "cubes": {str(d): [cube_json(p, k) for k in ks] for d, ks in c.cubes.items() if d >= 2},
    }


def ball_json(ball) -> dict:
    p = ball.presentation
    return {
        "schema": f"farley-ball/{SCHEMA_VERSION}",
        "presentation": p.to_text(),
        "base": p.format_word(ball.base),
        "radius": ball.radius,
        "vertices": [diagram_json(d) for d in ball.vertices],
        "edges": [[i, j, edge_json(p, a)] for i, j, a in ball.edges],
        "cubes": [[i, [edge_json(p, a) for a in atoms]] for i, atoms in ball.cubes],
    }


def budget_json(b) -> dict:
    if b is None:
        return None
    return {
        "max_word_length": b.max_word_length,
        "max_words": b.max_words,
        "max_cells": b.max_cells,
        "max_depth": b.max_depth,
    }


# -- witnesses ----------------------------------------------------------------


def nontrivial_witness_json(d: Diagram) -> dict:
    return {"type": "nontrivial", "diagram": diagram_json(d)}


def derivation_witness_json(p: Presentation, start, edges) -> dict:
    return {
        "type": "derivation",
        "start": p.format_word(start),
        "end": p.format_word(edges[-1].target if edges else start),
        "edges": derivation_json(p, edges),
    }


def z2_witness_json(p: Presentation, z) -> dict:
    s = z.split
    return {
        "type": "z2",
        "base": p.format_word(s.base),
        "ambient": p.format_word(s.ambient),
        "derivation": derivation_json(p, s.derivation),
        "factors": [p.format_word(f) for f in s.factors],
        "certificates": [diagram_json(d) for d in s.certificates],
        "A": diagram_json(z.a),
        "B": diagram_json(z.b),
    }


def self_intersection_json(p: Presentation, w) -> dict:
    return {
        "type": "self-intersection",
        "edge": edge_json(p, w.edge),
        "a": p.format_word(w.a),
        "b": p.format_word(w.b),
        "c": p.format_word(w.c),
        "left_derivation": derivation_json(p, w.left_derivation),
        "right_derivation": derivation_json(p, w.right_derivation),
        "square": cube_json(p, w.square),
    }


def check_witness(p: Presentation, doc: dict) -> list[str]:
    """Replay one witness; returns the list of failures (empty when valid)."""
    from .freeness import SplitWitness, build_z2_witness
    from .pathology import SelfIntersection, check_self_intersection
    from .presentation import replay

    kind = doc.get("type")
    try:
        if kind == "nontrivial":
            d = diagram_from_json(p, doc["diagram"])
            if not d.is_spherical:
                return ["diagram is not spherical"]
            if d.cell_count == 0:
                return ["diagram is trivial"]
            if not is_reduced(d):
                return ["diagram is not reduced"]
            return []
        if kind == "derivation":
            start = parse_word(p, doc["start"])
            edges = derivation_from_json(p, doc["edges"])
            end = replay(start, edges)
            return [] if end == parse_word(p, doc["end"]) else ["derivation ends elsewhere"]
        if kind == "z2":
            s = SplitWitness(
                parse_word(p, doc["base"]),
                parse_word(p, doc["ambient"]),
                derivation_from_json(p, doc["derivation"]),
                [parse_word(p, f) for f in doc["factors"]],
                [diagram_from_json(p, d) for d in doc["certificates"]],
            )
            z = build_z2_witness(p, s)
            out = []
            if z.a != diagram_from_json(p, doc["A"]):
                out.append("stored A differs from the rebuilt element")
            if z.b != diagram_from_json(p, doc["B"]):
                out.append("stored B differs from the rebuilt element")
            return out
        if kind == "self-intersection":
            sq = doc["square"]
            w = SelfIntersection(
                edge_from_json(p, doc["edge"]),
                parse_word(p, doc["a"]),
                parse_word(p, doc["b"]),
                parse_word(p, doc["c"]),
                derivation_from_json(p, doc["left_derivation"]),
                derivation_from_json(p, doc["right_derivation"]),
                (tuple(parse_word(p, c) for c in sq["contexts"]), tuple(sq["relations"])),
            )
            return [] if check_self_intersection(p, w) else ["self-intersection witness does not replay"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        return [f"{kind}: {exc}"]
    return [f"unknown witness type {kind!r}"]


def check_document(doc: dict) -> list[str]:
    """Replay every witness in a document produced by the command line tool."""
    if "presentation" not in doc:
        return ["document has no embedded presentation"]
    p = parse_presentation(doc["presentation"])
    witnesses = doc.get("witnesses")
    if witnesses is None and "type" in doc:
        witnesses = [doc]
    if not witnesses:
        return ["document has no witnesses"]
    out = []
    for k, w in enumerate(witnesses):
        out.extend(f"witness {k}: {msg}" for msg in check_witness(p, w))
    return out


__all__ = [
    "ball_json",
    "check_document",
    "check_witness",
    "component_json",
    "derivation_json",
    "diagram_from_json",
    "diagram_json",
    "dumps",
    "edge_from_json",
    "edge_json",
    "nontrivial_witness_json",
    "self_intersection_json",
    "z2_witness_json",
]
