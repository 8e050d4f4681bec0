"""Balls of the Farley complex X(P, w) and its hyperplanes.

Vertices are reduced diagrams with top w. Two vertices are adjacent when
they differ by one atom on the right, and distances are cell counts:
d(A, B) = #(A^-1 · B). A hyperplane is determined by its minimal diagram,
and its positive halfspace is the set of diagrams having it as a prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagrams import (
    Diagram,
    DiagramError,
    _Graph,
    atom_diagram,
    concatenate,
    invert,
    is_minimal,
    is_prefix,
    maximal_thin_suffix,
    product,
    reduce,
    split_as_sum,
    sum_diagrams,
    trivial_diagram,
)
from .freeness import group_nontrivial
from .pathology import InvariantViolation
from .presentation import (
    Atom,
    Presentation,
    RewriteEdge,
    Word,
    class_shape,
    explore_class,
    letter_closure,
    one_step_rewrites,
)
from .verdict import Budget, Status, Verdict


@dataclass
class FarleyBall:
    presentation: Presentation
    base: Word
    radius: int
    vertices: list  # reduced diagrams, ordered by (cell count, discovery)
    edges: list  # (i, j, atom) with vertices[j] = vertices[i] · atom, one more cell
    cubes: list = field(default_factory=list)  # (corner index, atoms), at least two atoms
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {d: i for i, d in enumerate(self.vertices)}

    def __contains__(self, d: Diagram) -> bool:
        return d in self.index

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def cube_vertices(self, corner: int, atoms: tuple) -> list[Diagram]:
        d = self.vertices[corner]
        out = []
        for k in range(len(atoms) + 1):
            for sub in combinations(atoms, k):
                out.append(reduce(concatenate(d, _thin(self.presentation, d.bottom, sub))))
        return out


def _thin(p: Presentation, w: Word, atoms) -> Diagram:
    steps = [(len(a.left), a.relation.index, a.forward) for a in sorted(atoms, key=lambda a: -len(a.left))]
    return Diagram.from_steps(p, w, steps)


def _extends(d: Diagram, a: Atom) -> Diagram | None:
    """d · a when it has one more cell than d, else None."""
    e = product(d, atom_diagram(d.presentation, a))
    return e if e.cell_count == d.cell_count + 1 else None


def build_ball(p: Presentation, w: Word, radius: int) -> FarleyBall:
    """All reduced diagrams with top w and at most ``radius`` cells."""
    if not w:
        raise ValueError("base word must be non-empty")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    vertices = [trivial_diagram(p, w)]
    index = {vertices[0]: 0}
    edges = []
    cubes = []
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for i in frontier:
            d = vertices[i]
            for a in one_step_rewrites(p, d.bottom):
                e = _extends(d, a)
                if e is None:
                    continue
                j = index.get(e)
                if j is None:
                    j = len(vertices)
                    vertices.append(e)
                    index[e] = j
                    nxt.append(j)
                edges.append((i, j, a))
        frontier = nxt
    # cubes: disjoint families of extending atoms at their corner closest to ε(w)
    for i, d in enumerate(vertices):
        ups = [a for a in one_step_rewrites(p, d.bottom) if _extends(d, a) is not None]
        spans = sorted(ups, key=lambda a: (len(a.left), a.relation.index, not a.forward))
        room = radius - d.cell_count
        for k in range(2, room + 1):
            for fam in combinations(spans, k):
                ends = [(len(a.left), len(a.left) + len(a.from_side)) for a in fam]
                if all(e1 <= s2 for (_, e1), (s2, _) in zip(ends, ends[1:])):
                    cubes.append((i, fam))
    return FarleyBall(p, w, radius, vertices, edges, cubes, index)


def combinatorial_distance(a: Diagram, b: Diagram) -> int:
    if a.top != b.top:
        raise DiagramError("distance needs diagrams with the same top")
    return reduce(concatenate(invert(a), b)).cell_count


def geodesic_between(a: Diagram, b: Diagram) -> list[Diagram]:
    """Vertices of a combinatorial geodesic from a to b."""
    if a.top != b.top:
        raise DiagramError("geodesic needs diagrams with the same top")
    q = reduce(concatenate(invert(a), b))
    path = [a]
    cur = a
    for atom in q.atoms():
        cur = product(cur, atom_diagram(a.presentation, atom))
        path.append(cur)
    if path[-1] != b:
        raise InvariantViolation("geodesic does not end at the target")
    return path


def _meet_with_base(x: Diagram, y: Diagram) -> Diagram:
    """Largest common prefix of x and y (same top), grown one atom at a time."""
    m = trivial_diagram(x.presentation, x.top)
    while True:
        for a in one_step_rewrites(x.presentation, m.bottom):
            e = _extends(m, a)
            if e is not None and is_prefix(e, x) and is_prefix(e, y):
                m = e
                break
        else:
            return m


def median_diagram(a: Diagram, b: Diagram, c: Diagram) -> Diagram:
    """The unique m with d(x, y) = d(x, m) + d(m, y) for each pair of a, b, c."""
    if not (a.top == b.top == c.top):
        raise DiagramError("median needs diagrams with the same top")
    # translate a to the base vertex, where the median is the common prefix
    x = reduce(concatenate(invert(a), b))
    y = reduce(concatenate(invert(a), c))
    m = reduce(concatenate(a, _meet_with_base(x, y)))
    dist = combinatorial_distance
    for u, v in ((a, b), (a, c), (b, c)):
        if dist(u, v) != dist(u, m) + dist(m, v):
            raise InvariantViolation("median equations fail")
    return m


def enumerate_minimal_diagrams(p: Presentation, w: Word, max_cells: int) -> list[Diagram]:
    ball = build_ball(p, w, max_cells)
    return [d for d in ball.vertices if d.cell_count and is_minimal(d)]


# ---------------------------------------------------------------------------
# hyperplanes


@dataclass(frozen=True)
class Hyperplane:
    minimal_diagram: Diagram
    stem: Diagram
    pivot: Atom  # the single suffix cell, on bottom(stem) = left · side · right

    @property
    def left(self) -> Word:
        return self.pivot.left

    @property
    def right(self) -> Word:
        return self.pivot.right

    @property
    def side(self) -> Word:
        return self.pivot.from_side


@dataclass(frozen=True)
class Halfspace:
    hyperplane: Hyperplane
    plus: bool  # plus is the side not containing ε(w)


def hyperplane_of(d: Diagram) -> Hyperplane:
    """Hyperplane whose minimal diagram is d."""
    if d.cell_count == 0 or not is_minimal(d):
        raise DiagramError("hyperplanes correspond to minimal diagrams")
    stem, suffix = maximal_thin_suffix(d)
    (pivot,) = suffix.atoms()
    return Hyperplane(d, stem, pivot)


def hyperplane_of_edge(d: Diagram, a: Atom) -> Hyperplane:
    """Hyperplane dual to the edge [d, d · a], where d · a has one more cell."""
    if _extends(d, a) is None:
        raise DiagramError("atom does not extend the diagram")
    g = _Graph.from_steps(d.presentation, d.top, d.steps() + [(len(a.left), a.relation.index, a.forward)])
    pred = g.predecessors()
    keep = {len(g.cells) - 1}
    stack = [len(g.cells) - 1]
    while stack:
        for j in pred[stack.pop()]:
            if j not in keep:
                keep.add(j)
                stack.append(j)
    m = Diagram.from_steps(d.presentation, d.top, g.steps_for(sorted(keep)))
    return hyperplane_of(m)


def halfspace_contains(h: Halfspace, d: Diagram) -> bool:
    if d.top != h.hyperplane.minimal_diagram.top:
        raise DiagramError("halfspace test needs a diagram with the base top")
    inside = is_prefix(h.hyperplane.minimal_diagram, d)
    return inside if h.plus else not inside


def hyperplane_boundaries(h: Hyperplane, ball: FarleyBall) -> tuple[dict, dict]:
    """Carriers of h inside the ball: vertex index -> (X, Y) with the vertex
    equal to stem ∘ (X + ε(side) + Y) (minus) or stem ∘ (X + Π + Y) (plus).
    Empty context parts are reported as None."""
    if h.minimal_diagram not in ball:
        raise ValueError("hyperplane's minimal diagram lies outside the ball")
    p = ball.presentation
    cuts = [len(h.left), len(h.left) + len(h.side)]
    pivot = atom_diagram(p, RewriteEdge((), h.pivot.relation, h.pivot.forward, ()))
    minus, plus = {}, {}
    inv_stem = invert(h.stem)
    for i, v in enumerate(ball.vertices):
        q = reduce(concatenate(inv_stem, v))
        parts = split_as_sum(q, cuts)
        if parts is None:
            continue
        x_part, mid, y_part = parts
        if mid.cell_count == 0:
            minus[i] = (x_part, y_part)
        elif mid == pivot:
            plus[i] = (x_part, y_part)
    return minus, plus


def _context_group(p: Presentation, u: Word, b: Budget) -> Verdict:
    """Non-triviality of D(P, u); the empty context has the trivial group."""
    if not u:
        return Verdict(Status.REFUTED, {"kind": "empty context"})
    return group_nontrivial(p, u, b)


def _hypothesis(p: Presentation, x: Word, u: Word, b: Budget) -> Verdict:
    """Refute x = x·u·ξ modulo P for every non-empty ξ."""
    if not x:
        return Verdict(Status.PROVED, {"kind": "empty left context"})
    sigma = letter_closure(p, x)
    if not set(u) <= sigma:
        return Verdict(Status.PROVED, {"kind": "letters", "closure": tuple(sorted(sigma))})
    shape = class_shape(p, x)
    cls = explore_class(p, x, b)
    hits = [v for v in cls.order if len(v) > len(x) + len(u) and v[:len(x) + len(u)] == x + u]
    if hits:
        return Verdict(Status.REFUTED, {"member": hits[0], "derivation": cls.derivation_to(hits[0])})
    if cls.complete:
        return Verdict(Status.PROVED, {"kind": "class exhausted", "class_size": len(cls.order)})
    return Verdict(Status.UNKNOWN, None, cls.budget_used,
                   notes={"partial_class": cls.order[:20], "shape": shape})


def stabilizer_is_trivial(p: Presentation, h: Hyperplane, b: Budget) -> Verdict:
    """Proved: stab(h) = {1}, via the product decomposition of the stabilizer
    as D(P, left) × D(P, right) conjugated by the stem."""
    hyp = _hypothesis(p, h.left, h.side, b)
    if not hyp.proved:
        return Verdict(Status.UNKNOWN, None, hyp.budget_used,
                       notes={"hypothesis": hyp.status.value, **hyp.notes})
    left = _context_group(p, h.left, b)
    right = _context_group(p, h.right, b)
    if left.refuted and right.refuted:
        return Verdict(Status.PROVED, {"hypothesis": hyp.certificate,
                                       "left": left.certificate, "right": right.certificate})
    for which, v in (("left", left), ("right", right)):
        if v.proved:
            # a non-trivial factor embeds as stem · (A + ε(side) + ε(right)) · stem^-1
            parts = [trivial_diagram(p, x) for x in (h.left, h.side, h.right) if x]
            k = 0 if which == "left" else len(parts) - 1
            parts[k] = v.certificate["diagram"]
            inner = parts[0]
            for d in parts[1:]:
                inner = sum_diagrams(inner, d)
            g = reduce(concatenate(concatenate(h.stem, inner), invert(h.stem)))
            return Verdict(Status.REFUTED, {"hypothesis": hyp.certificate, "factor": which, "element": g})
    return Verdict(Status.UNKNOWN, None,
                   notes={"left": left.status.value, "right": right.status.value})


__all__ = [
    "FarleyBall",
    "Halfspace",
    "Hyperplane",
    "build_ball",
    "combinatorial_distance",
    "enumerate_minimal_diagrams",
    "geodesic_between",
    "halfspace_contains",
    "hyperplane_boundaries",
    "hyperplane_of",
    "hyperplane_of_edge",
    "median_diagram",
    "stabilizer_is_trivial",
]
