"""Semigroup presentations, words and one-step rewrites.

A word is a tuple of letter ids. Relations are stored once, oriented as
written in the source, and applied in both directions.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .verdict import Budget, BudgetUsed, Status, Verdict

Word = tuple  # tuple[str, ...]

EMPTY: Word = ()


class PresentationError(ValueError):
    """Raised for malformed presentation text or words."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word
    index: int

    def sides(self, forward: bool) -> tuple[Word, Word]:
        """(from-side, to-side) for the given direction."""
        return (self.lhs, self.rhs) if forward else (self.rhs, self.lhs)


@dataclass(frozen=True)
class RewriteEdge:
    """The edge (left, u -> v, right) of the Squier complex.

    ``forward`` means u is the relation's lhs.
    """

    left: Word
    relation: Relation
    forward: bool
    right: Word

    @property
    def from_side(self) -> Word:
        return self.relation.sides(self.forward)[0]

    @property
    def to_side(self) -> Word:
        return self.relation.sides(self.forward)[1]

    @property
    def source(self) -> Word:
        return self.left + self.from_side + self.right

    @property
    def target(self) -> Word:
        return self.left + self.to_side + self.right

    @property
    def position(self) -> int:
        return len(self.left)

    def reversed(self) -> "RewriteEdge":
        return RewriteEdge(self.left, self.relation, not self.forward, self.right)

    def canonical(self) -> "RewriteEdge":
        """Forward orientation; identifies the unoriented edge."""
        return self if self.forward else self.reversed()

    def sort_key(self):
        return (len(self.left), self.relation.index, not self.forward, self.left, self.right)


# An atom of a semigroup diagram carries the same data as a rewrite edge.
Atom = RewriteEdge


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple
    relations: tuple

    def __post_init__(self):
        if not self.alphabet:
            raise PresentationError("alphabet is empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise PresentationError("duplicate letter in alphabet")
        letters = set(self.alphabet)
        seen = {}
        for rel in self.relations:
            if not rel.lhs or not rel.rhs:
                raise PresentationError(f"relation {rel.index} has an empty side")
            if rel.lhs == rel.rhs:
                raise PresentationError(f"relation {rel.index} is trivial (u = u)")
            for side in (rel.lhs, rel.rhs):
                for x in side:
                    if x not in letters:
                        raise PresentationError(f"letter {x!r} used but not declared")
            key = frozenset((rel.lhs, rel.rhs))
            if key in seen:
                raise PresentationError(
                    f"relation {rel.index} duplicates relation {seen[key]} (u=v and v=u)"
                )
            seen[key] = rel.index

    @classmethod
    def from_pairs(cls, alphabet: Iterable[str], pairs: Sequence[tuple]) -> "Presentation":
        """Build from letters and (lhs, rhs) pairs given as strings or tuples."""
        alphabet = tuple(alphabet)
        tmp = cls(alphabet, ())
        rels = tuple(
            Relation(tmp.word(l), tmp.word(r), i) for i, (l, r) in enumerate(pairs)
        )
        return cls(alphabet, rels)

    @property
    def multichar(self) -> bool:
        return any(len(x) != 1 for x in self.alphabet)

    def word(self, text) -> Word:
        """Parse a word; accepts tuples unchanged (after validation)."""
        if isinstance(text, tuple):
            letters = text
        else:
            text = text.strip()
            if "." in text or self.multichar:
                letters = tuple(x for x in text.split(".") if x)
            else:
                letters = tuple(text)
        for x in letters:
            if x not in self.alphabet:
                raise PresentationError(f"letter {x!r} used but not declared")
        return letters

    def format_word(self, w: Word) -> str:
        if not w:
            return ""
        return ".".join(w) if self.multichar else "".join(w)

    def relation(self, index: int) -> Relation:
        return self.relations[index]

    def to_text(self) -> str:
        lines = ["letters: " + " ".join(self.alphabet)]
        for rel in self.relations:
            lines.append(f"rel: {self.format_word(rel.lhs)} = {self.format_word(rel.rhs)}")
        return "\n".join(lines) + "\n"


_LINE = re.compile(r"^\s*(letters|rel)\s*:(.*)$")


def parse_presentation(text: str) -> Presentation:
    """Parse the ``letters:`` / ``rel:`` text format.

    Relations are indexed in file order. A pair given twice in either
    orientation is rejected.
    """
    alphabet = None
    raw_rels = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if not m:
            col = len(body) - len(body.lstrip()) + 1
            raise PresentationError("expected 'letters:' or 'rel:'", lineno, col)
        kind, rest = m.group(1), m.group(2)
        if kind == "letters":
            if alphabet is not None:
                raise PresentationError("letters declared twice", lineno)
            alphabet = tuple(rest.split())
            if not alphabet:
                raise PresentationError("alphabet is empty", lineno)
        else:
            if rest.count("=") != 1:
                raise PresentationError("relation must have exactly one '='", lineno, body.find(":") + 2)
            lhs, rhs = (s.strip() for s in rest.split("="))
            if not lhs or not rhs:
                raise PresentationError("relation side is empty", lineno)
            raw_rels.append((lineno, lhs, rhs))
    if alphabet is None:
        # Allow relation-only files: letters are taken from the relations.
        seen = []
        for _, lhs, rhs in raw_rels:
            for side in (lhs, rhs):
                parts = side.split(".") if "." in side else list(side)
                for x in parts:
                    if x and x not in seen:
                        seen.append(x)
        if not seen:
            raise PresentationError("no letters declared")
        alphabet = tuple(seen)
    base = Presentation(alphabet, ())
    rels = []
    seen_pairs = {}
    for i, (lineno, lhs, rhs) in enumerate(raw_rels):
        try:
            u, v = base.word(lhs), base.word(rhs)
        except PresentationError as exc:
            raise PresentationError(str(exc), lineno) from None
        if u == v:
            raise PresentationError("trivial relation u = u", lineno)
        key = frozenset((u, v))
        if key in seen_pairs:
            raise PresentationError(
                f"duplicate relation pair (first given on line {seen_pairs[key]})", lineno
            )
        seen_pairs[key] = lineno
        rels.append(Relation(u, v, i))
    return Presentation(alphabet, tuple(rels))


@lru_cache(maxsize=64)
def _sides_by_first_letter(p: Presentation) -> dict:
    index: dict = {}
    for rel in p.relations:
        for forward in (True, False):
            frm = rel.sides(forward)[0]
            index.setdefault(frm[0], []).append((frm, rel, forward))
    return index


def one_step_rewrites(p: Presentation, w: Word) -> list[RewriteEdge]:
    """Every edge leaving ``w``, ordered by (position, relation index, direction)."""
    out = []
    n = len(w)
    index = _sides_by_first_letter(p)
    for i in range(n):
        for frm, rel, forward in index.get(w[i], ()):
            k = len(frm)
            if i + k <= n and w[i:i + k] == frm:
                out.append(RewriteEdge(w[:i], rel, forward, w[i + k:]))
    return out


def apply_edge(w: Word, e: RewriteEdge) -> Word:
    if e.source != w:
        raise ValueError("edge does not start at the given word")
    return e.target


def replay(w: Word, derivation: Sequence[RewriteEdge]) -> Word:
    for e in derivation:
        w = apply_edge(w, e)
    return w


# ---------------------------------------------------------------------------
# bounded class exploration


@dataclass
class ClassExploration:
    """BFS over [w]_P. ``parent`` maps each word to the edge that reached it."""

    start: Word
    order: list
    parent: dict
    complete: bool
    budget_used: Budget

    @property
    def words(self) -> set:
        return set(self.order)

    def derivation_to(self, target: Word) -> list[RewriteEdge]:
        path = []
        cur = target
        while cur != self.start:
            e = self.parent[cur]
            path.append(e)
            cur = e.source
        path.reverse()
        return path


def explore_class(p: Presentation, w: Word, b: Budget) -> ClassExploration:
    if not w:
        raise ValueError("base word must be non-empty")
    order = [w]
    parent = {w: None}
    depth = {w: 0}
    queue = deque([w])
    complete = True
    while queue:
        u = queue.popleft()
        for e in one_step_rewrites(p, u):
            v = e.target
            if v in parent:
                continue
            if len(v) > b.max_word_length or depth[u] + 1 > b.max_depth or len(order) >= b.max_words:
                complete = False
                continue
            parent[v] = e
            depth[v] = depth[u] + 1
            order.append(v)
            queue.append(v)
    used = BudgetUsed(
        max_word_length=max(len(x) for x in order),
        max_words=len(order),
        max_cells=b.max_cells,
        max_depth=max(depth.values()),
    )
    return ClassExploration(w, order, parent, complete, used)


def enumerate_word_class(p: Presentation, w: Word, b: Budget) -> tuple[set, bool]:
    """Bounded closure of ``w`` under rewriting; ``complete`` means it is all of [w]."""
    ex = explore_class(p, w, b)
    return ex.words, ex.complete


# ---------------------------------------------------------------------------
# sound over-approximations of a word class


@dataclass(frozen=True)
class ClassShape:
    """Letters, first letters and last letters that can occur in [w]."""

    letters: frozenset
    first: frozenset
    last: frozenset

    def admits(self, v: Word) -> bool:
        return (
            bool(v)
            and set(v) <= self.letters
            and v[0] in self.first
            and v[-1] in self.last
        )


def letter_closure(p: Presentation, letters: Iterable[str]) -> frozenset:
    """Smallest letter set containing ``letters`` and closed under the relations
    whose one side is spelled with letters already in the set."""
    sigma = set(letters)
    changed = True
    while changed:
        changed = False
        for rel in p.relations:
            for a, b in ((rel.lhs, rel.rhs), (rel.rhs, rel.lhs)):
                if set(a) <= sigma and not set(b) <= sigma:
                    sigma |= set(b)
                    changed = True
    return frozenset(sigma)


def class_shape(p: Presentation, w: Word) -> ClassShape:
    sigma = letter_closure(p, w)
    rels = [r for r in p.relations if set(r.lhs) <= sigma]

    def close(start, pick):
        ends = {start}
        changed = True
        while changed:
            changed = False
            for r in rels:
                for a, b in ((r.lhs, r.rhs), (r.rhs, r.lhs)):
                    if pick(a) in ends and pick(b) not in ends:
                        ends.add(pick(b))
                        changed = True
        return frozenset(ends)

    return ClassShape(sigma, close(w[0], lambda s: s[0]), close(w[-1], lambda s: s[-1]))


def words_equal_mod_p(p: Presentation, w1: Word, w2: Word, b: Budget) -> Verdict:
    """Tri-state equality modulo P.

    Proved carries a derivation from w1 to w2; Refuted is issued when the
    class of w1 is exhausted, or when w2 violates a class-shape invariant of w1.
    """
    if not w1 or not w2:
        raise ValueError("words must be non-empty")
    if w1 == w2:
        return Verdict(Status.PROVED, {"derivation": []}, BudgetUsed(len(w1), 1, b.max_cells, 0))
    shape = class_shape(p, w1)
    if not shape.admits(w2):
        return Verdict(
            Status.REFUTED,
            {"reason": "class-shape", "shape": shape},
            BudgetUsed(len(w1), 1, b.max_cells, 0),
        )
    ex = explore_class(p, w1, b)
    if w2 in ex.parent:
        return Verdict(Status.PROVED, {"derivation": ex.derivation_to(w2)}, ex.budget_used)
    if ex.complete:
        return Verdict(Status.REFUTED, {"reason": "class exhausted", "class_size": len(ex.order)}, ex.budget_used)
    return Verdict(Status.UNKNOWN, {"explored": len(ex.order)}, ex.budget_used)
