"""Hyperplane pathologies of Squier complexes.

Edges are dual to the same hyperplane iff they carry the same oriented
relation and their contexts agree modulo P. On top of that criterion this
module searches for self-intersecting hyperplanes, checks 2-sidedness on an
explored fragment, and evaluates the sufficient criterion for specialness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentation import (
    Presentation,
    RewriteEdge,
    Word,
    explore_class,
    words_equal_mod_p,
)
from .squier import SquierComponent, cube_faces, cube_vertex, edge_from_key
from .verdict import Budget, Status, Verdict


class InvariantViolation(RuntimeError):
    """An explored fragment contradicts a theorem the code relies on."""


def inner_budget(b: Budget) -> Budget:
    """Budget for the many small equality checks a pathology search makes."""
    return b.scaled(max_words=max(200, b.max_words // 50))


def member_cap(b: Budget) -> int:
    """Class members searched for a violating triple when the class is truncated."""
    return max(20, b.max_words // 400)


def _context_equal(p: Presentation, u: Word, v: Word, b: Budget) -> Verdict:
    if u == v:
        return Verdict(Status.PROVED, {"derivation": []})
    if not u or not v:
        return Verdict(Status.REFUTED, {"reason": "empty versus non-empty context"})
    return words_equal_mod_p(p, u, v, b)


def same_hyperplane_squier(p: Presentation, e1: RewriteEdge, e2: RewriteEdge, b: Budget) -> Verdict:
    """Are the oriented edges e1, e2 dual to the same hyperplane of S(P)?"""
    if e1.relation != e2.relation or e1.forward != e2.forward:
        return Verdict(Status.REFUTED, {"reason": "relation labels differ"})
    left = _context_equal(p, e1.left, e2.left, b)
    right = _context_equal(p, e1.right, e2.right, b)
    cert = {"left": left, "right": right}
    if left.refuted or right.refuted:
        return Verdict(Status.REFUTED, cert)
    if left.proved and right.proved:
        return Verdict(Status.PROVED, cert)
    return Verdict(Status.UNKNOWN, cert)


@dataclass
class SelfIntersection:
    edge: RewriteEdge  # (a, p -> q, b p c)
    a: Word
    b: Word
    c: Word
    left_derivation: list  # a  ->  a p b
    right_derivation: list  # c  ->  b p c
    square: tuple  # cube key of (a, p->q, b, p->q, c)


def self_intersection_search(p: Presentation, c: SquierComponent, b: Budget) -> Verdict:
    """Look for an edge (a, p->q, bpc) with a = apb and c = bpc modulo P."""
    b = inner_budget(b)
    undecided = 0
    checked = 0
    for e0 in c.edges:
        for e in (e0, e0.reversed()):
            a, pw, beta = e.left, e.from_side, e.right
            if not a:
                continue
            for i in range(len(beta) - len(pw) + 1):
                if beta[i:i + len(pw)] != pw:
                    continue
                mid, tail = beta[:i], beta[i + len(pw):]
                if not tail:
                    continue
                checked += 1
                v1 = words_equal_mod_p(p, a, a + pw + mid, b)
                if v1.refuted:
                    continue
                v2 = words_equal_mod_p(p, tail, mid + pw + tail, b)
                if v1.proved and v2.proved:
                    rel = e.relation.index
                    contexts = (a, mid, tail)
                    square = (contexts, (rel, rel))
                    witness = SelfIntersection(
                        e, a, mid, tail,
                        v1.certificate["derivation"], v2.certificate["derivation"], square,
                    )
                    return Verdict(Status.PROVED, witness, c.budget_used)
                if not v2.refuted:
                    undecided += 1
    if c.complete and undecided == 0:
        return Verdict(Status.REFUTED, {"candidates_refuted": checked}, c.budget_used)
    return Verdict(
        Status.UNKNOWN, None, c.budget_used,
        notes={"undecided_candidates": undecided, "complete": c.complete},
    )


def check_self_intersection(p: Presentation, w: SelfIntersection) -> bool:
    """Replay a self-intersection witness."""
    from .presentation import replay

    pw = w.edge.from_side
    if w.edge.left != w.a or w.edge.right != w.b + pw + w.c:
        return False
    try:
        if replay(w.a, w.left_derivation) != w.a + pw + w.b:
            return False
        if replay(w.c, w.right_derivation) != w.b + pw + w.c:
            return False
    except ValueError:
        return False
    # the two edges of the square are adjacent and parallel-equivalent
    contexts, rels = w.square
    if contexts != (w.a, w.b, w.c) or rels != (w.edge.relation.index,) * 2:
        return False
    corner = cube_vertex(w.square, (w.edge.forward, w.edge.forward), p)
    return corner == w.edge.source


# ---------------------------------------------------------------------------
# 2-sidedness


class _ParityUnionFind:
    def __init__(self):
        self.parent = {}
        self.parity = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            return x, 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        # recompute parities relative to root
        return root, self.parity[path[0]] if path else 0

    def union(self, x, y, rel_parity) -> bool:
        """Record parity(x) xor parity(y) = rel_parity; False on contradiction."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == rel_parity
        self.parent[rx] = ry
        self.parity[rx] = px ^ py ^ rel_parity
        return True


def hyperplane_classes(c: SquierComponent) -> tuple[dict, list]:
    """Parallelism classes of edges through squares.

    Returns (edge key -> (class root, orientation parity), contradictions).
    Parity compares each edge's forward orientation with its class root; a
    contradiction would be a 1-sided hyperplane.
    """
    p = c.presentation
    uf = _ParityUnionFind()
    bad = []
    for k in c.cubes.get(1, []):
        uf.find(k)
    for sq in c.squares:
        faces = {(i, side): f for f, i, side in cube_faces(sq, p)}
        # coordinate 0 moves along faces collapsing coordinate 1, and vice versa
        for moving, fixed in ((0, 1), (1, 0)):
            e_l = faces[(fixed, True)]
            e_r = faces[(fixed, False)]
            align = []
            for fixed_side, ek in ((True, e_l), (False, e_r)):
                sides = [True, True]
                sides[fixed] = fixed_side
                corner = cube_vertex(sq, tuple(sides), p)  # moving coordinate at lhs
                align.append(0 if edge_from_key(ek, p).source == corner else 1)
            if not uf.union(e_l, e_r, align[0] ^ align[1]):
                bad.append((sq, e_l, e_r))
    classes = {k: uf.find(k) for k in c.cubes.get(1, [])}
    return classes, bad


def two_sidedness_check(c: SquierComponent) -> Verdict:
    """Every hyperplane met by the explored fragment is 2-sided.

    Raises InvariantViolation on a counterexample chain, or when a class
    mixes relation labels.
    """
    classes, bad = hyperplane_classes(c)
    if bad:
        raise InvariantViolation(f"1-sided hyperplane through square {bad[0][0]!r}")
    labels: dict = {}
    for k, (root, _par) in classes.items():
        rel = k[1][0]
        if labels.setdefault(root, rel) != rel:
            raise InvariantViolation("hyperplane carries two relation labels")
    return Verdict(
        Status.PROVED,
        {"hyperplanes": len(set(r for r, _ in classes.values())), "edges": len(classes)},
        c.budget_used,
    )


# ---------------------------------------------------------------------------
# specialness


def specialness_criterion(p: Presentation, w: Word, b: Budget) -> Verdict:
    """Proved means no (a, b, p) with w = ab, a = ap, b = pb exists, so the
    Squier complex S(P, w) is special. A violating triple leaves the
    criterion silent (Unknown) and is reported in the notes."""
    cls = explore_class(p, w, b)
    inner = inner_budget(b)
    members = cls.order if cls.complete else cls.order[:member_cap(b)]
    classes: dict = {}
    undecided = 0
    for member in members:
        for i in range(1, len(member)):
            a, bb = member[:i], member[i:]
            if a not in classes:
                classes[a] = explore_class(p, a, inner)
            ca = classes[a]
            cands = [v[len(a):] for v in ca.order if len(v) > len(a) and v[:len(a)] == a]
            for pw in cands:
                v = words_equal_mod_p(p, bb, pw + bb, inner)
                if v.proved:
                    return Verdict(
                        Status.UNKNOWN, None, cls.budget_used,
                        notes={
                            "violating_triple": (a, bb, pw),
                            "member": member,
                            "a_derivation": ca.derivation_to(a + pw),
                            "b_derivation": v.certificate["derivation"],
                        },
                    )
                if v.unknown:
                    undecided += 1
            if not ca.complete:
                undecided += 1
    if cls.complete and undecided == 0:
        return Verdict(
            Status.PROVED,
            {"class_size": len(cls.order), "splits_refuted": sum(len(m) - 1 for m in cls.order)},
            cls.budget_used,
        )
    return Verdict(
        Status.UNKNOWN, None, cls.budget_used,
        notes={"complete": cls.complete, "undecided": undecided, "members_searched": len(members)},
    )


__all__ = [
    "InvariantViolation",
    "SelfIntersection",
    "check_self_intersection",
    "hyperplane_classes",
    "same_hyperplane_squier",
    "self_intersection_search",
    "specialness_criterion",
    "two_sidedness_check",
]

