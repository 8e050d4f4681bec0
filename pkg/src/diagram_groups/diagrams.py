"""Semigroup diagrams as canonically layered atom sequences.

A diagram is stored as its top word and its left-greedy layering: cell k
sits in layer 1 + (longest chain of cells below it), and atoms inside a
layer are listed by offset. Offsets in layer i refer to the word obtained
after applying layers 1..i-1. Two derivations that differ by commuting
independent cells give the same layering, so equality of diagrams is
equality of this encoding.

Internally every operation goes through a cell graph: tokens are the
edges of the diagram (one per letter occurrence), a cell consumes a
contiguous run of tokens and produces a new run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .presentation import Atom, Presentation, RewriteEdge, Word

# (offset, relation index, forward)
Step = tuple


class DiagramError(ValueError):
    pass


@dataclass
class _Cell:
    rel: int
    forward: bool
    inputs: tuple
    outputs: tuple


class _Graph:
    """Mutable cell graph; cells are kept in a topological order."""

    def __init__(self, p: Presentation, top: Word):
        self.p = p
        self.top = tuple(range(len(top)))
        self.label = dict(enumerate(top))
        self.cells: list[_Cell] = []
        self.current = list(self.top)
        self._next = len(top)

    @classmethod
    def from_steps(cls, p: Presentation, top: Word, steps: Iterable[Step]) -> "_Graph":
        g = cls(p, top)
        for step in steps:
            g.apply(*step)
        return g

    def apply(self, offset: int, rel: int, forward: bool) -> None:
        frm, to = self.p.relations[rel].sides(forward)
        k = len(frm)
        run = self.current[offset:offset + k]
        if offset < 0 or len(run) != k or tuple(self.label[t] for t in run) != frm:
            raise DiagramError(
                f"relation side {self.p.format_word(frm)!r} does not occur at offset {offset}"
            )
        out = tuple(range(self._next, self._next + len(to)))
        self._next += len(to)
        for t, x in zip(out, to):
            self.label[t] = x
        self.cells.append(_Cell(rel, forward, tuple(run), out))
        self.current[offset:offset + k] = out

    # -- structure -----------------------------------------------------

    def producers(self) -> dict:
        prod = {}
        for i, c in enumerate(self.cells):
            for t in c.outputs:
                prod[t] = i
        return prod

    def consumers(self) -> dict:
        cons = {}
        for i, c in enumerate(self.cells):
            for t in c.inputs:
                cons[t] = i
        return cons

    def levels(self) -> list[int]:
        prod = self.producers()
        lev = []
        for c in self.cells:
            lv = 1
            for t in c.inputs:
                j = prod.get(t)
                if j is not None:
                    lv = max(lv, lev[j] + 1)
            lev.append(lv)
        return lev

    def successors(self) -> list[set]:
        cons = self.consumers()
        return [{cons[t] for t in c.outputs if t in cons} for c in self.cells]

    def predecessors(self) -> list[set]:
        prod = self.producers()
        return [{prod[t] for t in c.inputs if t in prod} for c in self.cells]

    def steps_for(self, order: Sequence[int]) -> list[Step]:
        """Sequential steps applying the given cells (a downward-closed set in
        topological order) to the top word."""
        current = list(self.top)
        steps = []
        for i in order:
            c = self.cells[i]
            off = current.index(c.inputs[0])
            if tuple(current[off:off + len(c.inputs)]) != c.inputs:
                raise DiagramError("cell inputs are not contiguous; not a downward-closed set")
            steps.append((off, c.rel, c.forward))
            current[off:off + len(c.inputs)] = c.outputs
        return steps

    def word_of(self, tokens) -> Word:
        return tuple(self.label[t] for t in tokens)

    def canonical_layers(self) -> tuple:
        lev = self.levels()
        if not lev:
            return ()
        by_level: dict[int, list[int]] = {}
        for i, lv in enumerate(lev):
            by_level.setdefault(lv, []).append(i)
        current = list(self.top)
        layers = []
        for lv in range(1, max(lev) + 1):
            pos = {t: k for k, t in enumerate(current)}
            placed = []
            for i in by_level[lv]:
                c = self.cells[i]
                off = pos[c.inputs[0]]
                if tuple(current[off:off + len(c.inputs)]) != c.inputs:
                    raise DiagramError("internal: non-contiguous cell inputs")
                placed.append((off, i))
            placed.sort()
            layer = tuple((off, self.cells[i].rel, self.cells[i].forward) for off, i in placed)
            for off, i in reversed(placed):
                c = self.cells[i]
                current[off:off + len(c.inputs)] = c.outputs
            layers.append(layer)
        return tuple(layers)

    # -- dipoles -------------------------------------------------------

    def dipoles(self) -> list[tuple[int, int]]:
        prod = self.producers()
        found = []
        for j, b in enumerate(self.cells):
            srcs = {prod.get(t) for t in b.inputs}
            if len(srcs) != 1:
                continue
            (i,) = srcs
            if i is None:
                continue
            a = self.cells[i]
            if a.outputs == b.inputs and a.rel == b.rel and a.forward != b.forward:
                found.append((i, j))
        return found

    def cancel(self, i: int, j: int) -> None:
        a, b = self.cells[i], self.cells[j]
        subst = dict(zip(b.outputs, a.inputs))
        keep = []
        for k, c in enumerate(self.cells):
            if k in (i, j):
                continue
            if any(t in subst for t in c.inputs):
                c = _Cell(c.rel, c.forward, tuple(subst.get(t, t) for t in c.inputs), c.outputs)
            keep.append(c)
        self.cells = keep
        self.current = [subst.get(t, t) for t in self.current]

    def reduce(self, rng: random.Random | None = None) -> None:
        while True:
            ds = self.dipoles()
            if not ds:
                return
            i, j = rng.choice(ds) if rng is not None else ds[0]
            self.cancel(i, j)


class Diagram:
    """A (top, bottom)-diagram over a fixed presentation.

    Construct with :func:`trivial_diagram`, :func:`atom_diagram`,
    :func:`from_derivation` or :meth:`from_steps`.
    """

    __slots__ = ("presentation", "top", "layers", "bottom", "cell_count", "_hash")

    def __init__(self, presentation: Presentation, top: Word, layers: tuple):
        self.presentation = presentation
        self.top = tuple(top)
        self.layers = layers
        self.cell_count = sum(len(l) for l in layers)
        self.bottom = self._compute_bottom()
        self._hash = hash((self.top, self.layers))

    def _compute_bottom(self) -> Word:
        w = list(self.top)
        for layer in self.layers:
            for off, rel, fwd in reversed(layer):
                frm, to = self.presentation.relations[rel].sides(fwd)
                if tuple(w[off:off + len(frm)]) != frm:
                    raise DiagramError("layer does not match the word it is applied to")
                w[off:off + len(frm)] = to
        return tuple(w)

    @classmethod
    def from_steps(cls, p: Presentation, top: Word, steps: Iterable[Step]) -> "Diagram":
        g = _Graph.from_steps(p, top, steps)
        return cls(p, top, g.canonical_layers())

    def steps(self) -> list[Step]:
        """A derivation realising the diagram, layer by layer, right to left
        inside a layer so offsets stay valid."""
        out = []
        for layer in self.layers:
            out.extend(reversed(layer))
        return out

    def atoms(self) -> list[Atom]:
        """The same derivation as rewrite edges."""
        w = list(self.top)
        out = []
        for off, rel, fwd in self.steps():
            r = self.presentation.relations[rel]
            frm, to = r.sides(fwd)
            out.append(RewriteEdge(tuple(w[:off]), r, fwd, tuple(w[off + len(frm):])))
            w[off:off + len(frm)] = to
        return out

    def graph(self) -> _Graph:
        return _Graph.from_steps(self.presentation, self.top, self.steps())

    @property
    def is_spherical(self) -> bool:
        return self.top == self.bottom

    @property
    def is_trivial(self) -> bool:
        return self.cell_count == 0

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.top == other.top and self.layers == other.layers

    def __hash__(self):
        return self._hash

    def __repr__(self):
        fw = self.presentation.format_word
        return f"Diagram({fw(self.top)!r} -> {fw(self.bottom)!r}, cells={self.cell_count}, layers={self.layers})"

    # operator sugar: d1 @ d2 is the reduced product, ~d the inverse
    def __matmul__(self, other: "Diagram") -> "Diagram":
        return reduce(concatenate(self, other))

    def __invert__(self) -> "Diagram":
        return invert(self)


# ---------------------------------------------------------------------------
# construction


def trivial_diagram(p: Presentation, w: Word) -> Diagram:
    if not w:
        raise DiagramError("trivial diagram needs a non-empty word")
    return Diagram(p, w, ())


def atom_diagram(p: Presentation, a: Atom) -> Diagram:
    rel = a.relation
    if rel.index >= len(p.relations) or p.relations[rel.index] != rel:
        raise DiagramError("atom relation does not belong to the presentation")
    return Diagram(p, a.source, (((len(a.left), rel.index, a.forward),),))


def from_derivation(p: Presentation, start: Word, derivation: Sequence[RewriteEdge]) -> Diagram:
    """Diagram of a derivation given as consecutive rewrite edges."""
    steps = []
    w = start
    for e in derivation:
        if e.source != w:
            raise DiagramError("derivation is not consecutive")
        steps.append((len(e.left), e.relation.index, e.forward))
        w = e.target
    return Diagram.from_steps(p, start, steps)


# ---------------------------------------------------------------------------
# arithmetic


def concatenate(d1: Diagram, d2: Diagram) -> Diagram:
    if d1.bottom != d2.top:
        raise DiagramError("bottom of the first diagram differs from top of the second")
    return Diagram.from_steps(d1.presentation, d1.top, d1.steps() + d2.steps())


def sum_diagrams(d1: Diagram, d2: Diagram) -> Diagram:
    shift = len(d1.bottom)
    steps = d1.steps() + [(off + shift, rel, fwd) for off, rel, fwd in d2.steps()]
    return Diagram.from_steps(d1.presentation, d1.top + d2.top, steps)


def invert(d: Diagram) -> Diagram:
    steps = [(off, rel, not fwd) for off, rel, fwd in reversed(d.steps())]
    return Diagram.from_steps(d.presentation, d.bottom, steps)


def reduce(d: Diagram, rng: random.Random | None = None) -> Diagram:
    """Unique reduced form; ``rng`` picks dipoles at random (for testing confluence)."""
    if d.cell_count < 2:
        return d
    g = d.graph()
    g.reduce(rng)
    return Diagram(d.presentation, d.top, g.canonical_layers())


def is_reduced(d: Diagram) -> bool:
    return d.cell_count < 2 or not d.graph().dipoles()


def group_product(d1: Diagram, d2: Diagram) -> Diagram:
    if not (d1.is_spherical and d2.is_spherical) or d1.top != d2.top:
        raise DiagramError("group product needs spherical diagrams with the same base")
    return reduce(concatenate(d1, d2))


def product(d1: Diagram, d2: Diagram) -> Diagram:
    """Reduced form of d1 ∘ d2 (the groupoid product)."""
    return reduce(concatenate(d1, d2))


def power(d: Diagram, n: int) -> Diagram:
    if not d.is_spherical:
        raise DiagramError("powers need a spherical diagram")
    base = d if n >= 0 else invert(d)
    out = trivial_diagram(d.presentation, d.top)
    for _ in range(abs(n)):
        out = product(out, base)
    return out


def conjugate(gamma: Diagram, d: Diagram) -> Diagram:
    """gamma · d · gamma^-1 for a (w, u)-diagram gamma and spherical d with base u."""
    return reduce(concatenate(concatenate(gamma, d), invert(gamma)))


# ---------------------------------------------------------------------------
# prefixes and thin suffixes


def is_prefix(d1: Diagram, d2: Diagram) -> bool:
    """d1 ≤ d2, decided by the geodesic criterion #d2 = #d1 + #(d1^-1 · d2)."""
    if d1.top != d2.top:
        raise DiagramError("prefix test needs diagrams with the same top")
    rest = reduce(concatenate(invert(d1), d2))
    return d2.cell_count == d1.cell_count + rest.cell_count


def quotient(d1: Diagram, d2: Diagram) -> Diagram:
    """d1^-1 · d2; when d1 ≤ d2 this is the diagram d3 with d2 = d1 ∘ d3."""
    return reduce(concatenate(invert(d1), d2))


def maximal_thin_suffix(d: Diagram) -> tuple[Diagram, Diagram]:
    """(stem, suffix) with d = stem ∘ suffix and suffix the sum of all
    cells with nothing below them."""
    if d.cell_count == 0:
        raise DiagramError("trivial diagram has no thin suffix")
    g = d.graph()
    succ = g.successors()
    sinks = [i for i, s in enumerate(succ) if not s]
    body = [i for i in range(len(g.cells)) if succ[i]]
    stem_steps = g.steps_for(body)
    stem = Diagram.from_steps(d.presentation, d.top, stem_steps)
    # replay the sinks on the stem's bottom
    current = list(g.top)
    for i in body:
        c = g.cells[i]
        off = current.index(c.inputs[0])
        current[off:off + len(c.inputs)] = c.outputs
    placed = sorted((current.index(g.cells[i].inputs[0]), i) for i in sinks)
    suffix_steps = [(off, g.cells[i].rel, g.cells[i].forward) for off, i in reversed(placed)]
    suffix = Diagram.from_steps(d.presentation, stem.bottom, suffix_steps)
    return stem, suffix


def is_thin(d: Diagram) -> bool:
    return len(d.layers) <= 1


def is_minimal(d: Diagram) -> bool:
    if d.cell_count == 0:
        raise DiagramError("trivial diagram is not minimal")
    return maximal_thin_suffix(d)[1].cell_count == 1


def prefixes(d: Diagram) -> list[Diagram]:
    """All prefixes of a diagram (one per downward-closed set of cells)."""
    g = d.graph()
    pred = g.predecessors()
    n = len(g.cells)
    out = []

    def rec(i: int, chosen: list[int], chosen_set: set):
        if i == n:
            out.append(Diagram.from_steps(d.presentation, d.top, g.steps_for(chosen)))
            return
        rec(i + 1, chosen, chosen_set)
        if pred[i] <= chosen_set:
            chosen.append(i)
            chosen_set.add(i)
            rec(i + 1, chosen, chosen_set)
            chosen.pop()
            chosen_set.discard(i)

    rec(0, [], set())
    return out


def split_as_sum(d: Diagram, cuts: Sequence[int]) -> list[Diagram] | None:
    """Write d as a sum of diagrams whose tops are the pieces of top(d)
    between the given cut positions, or return None."""
    bounds = [0, *cuts, len(d.top)]
    if any(a > b for a, b in zip(bounds, bounds[1:])):
        raise ValueError("cuts must be increasing")
    g = d.graph()
    owner = {}
    for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
        for t in range(a, b):
            owner[t] = k
    parts_steps: list[list[int]] = [[] for _ in range(len(bounds) - 1)]
    for i, c in enumerate(g.cells):
        ks = {owner[t] for t in c.inputs}
        if len(ks) != 1:
            return None
        (k,) = ks
        for t in c.outputs:
            owner[t] = k
        parts_steps[k].append(i)
    # each part must also be contiguous at the bottom, which holds by planarity
    parts = []
    for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
        top = d.top[a:b]
        if not top:
            if parts_steps[k]:
                return None
            parts.append(None)
            continue
        sub = _Graph(d.presentation, top)
        remap = {t: t - a for t in range(a, b)}
        for i in parts_steps[k]:
            c = g.cells[i]
            ins = tuple(remap[t] for t in c.inputs)
            off = sub.current.index(ins[0])
            sub.apply(off, c.rel, c.forward)
            for t_old, t_new in zip(c.outputs, sub.cells[-1].outputs):
                remap[t_old] = t_new
        parts.append(Diagram(d.presentation, top, sub.canonical_layers()))
    return parts


def thin_diagrams_on(p: Presentation, w: Word, atoms: Sequence[Atom] | None = None) -> list[Diagram]:
    """All thin diagrams with top w (sets of pairwise disjoint atoms), ε(w) included."""
    from .presentation import one_step_rewrites

    if atoms is None:
        atoms = one_step_rewrites(p, w)
    spans = [(len(a.left), len(a.left) + len(a.from_side), a) for a in atoms]
    out = []

    def rec(start: int, last_end: int, chosen: list):
        steps = [(s, a.relation.index, a.forward) for s, _, a in reversed(chosen)]
        out.append(Diagram.from_steps(p, w, steps))
        for k in range(start, len(spans)):
            s, e, a = spans[k]
            if s >= last_end:
                chosen.append(spans[k])
                rec(k + 1, e, chosen)
                chosen.pop()

    spans.sort(key=lambda x: (x[0], x[1], x[2].relation.index, not x[2].forward))
    rec(0, 0, [])
    return out


def random_derivation(p: Presentation, w: Word, length: int, rng: random.Random) -> Diagram:
    """Diagram of a random walk of the given length in the Squier complex."""
    from .presentation import one_step_rewrites

    path = []
    cur = w
    for _ in range(length):
        es = one_step_rewrites(p, cur)
        if not es:
            break
        e = rng.choice(es)
        path.append(e)
        cur = e.target
    return from_derivation(p, w, path)


__all__ = [
    "Diagram",
    "DiagramError",
    "atom_diagram",
    "concatenate",
    "conjugate",
    "from_derivation",
    "group_product",
    "invert",
    "is_minimal",
    "is_prefix",
    "is_reduced",
    "is_thin",
    "maximal_thin_suffix",
    "power",
    "prefixes",
    "product",
    "quotient",
    "random_derivation",
    "reduce",
    "split_as_sum",
    "sum_diagrams",
    "thin_diagrams_on",
    "trivial_diagram",
]
