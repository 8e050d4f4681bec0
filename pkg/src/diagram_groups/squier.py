"""Explored fragments of Squier complexes, their homology and fundamental groups.

An n-cube of S(P) is keyed as (a1, r1, a2, r2, ..., an, rn, a_{n+1}): the
context words between n pairwise disjoint relation occurrences together
with the relation indices. Vertices are 0-cubes, edges 1-cubes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from itertools import product as iproduct

from .presentation import Presentation, RewriteEdge, Word, one_step_rewrites
from .verdict import Budget, BudgetUsed

# cube key: (contexts: tuple of Word, rels: tuple of int)
CubeKey = tuple


def cube_key(word: Word, apps: list[tuple[int, int, bool]], p: Presentation) -> CubeKey:
    """Key of the cube at ``word`` spanned by disjoint applications
    (offset, relation index, forward), sorted by offset."""
    contexts = []
    rels = []
    pos = 0
    for off, rel, fwd in apps:
        frm = p.relations[rel].sides(fwd)[0]
        contexts.append(word[pos:off])
        rels.append(rel)
        pos = off + len(frm)
    contexts.append(word[pos:])
    return (tuple(contexts), tuple(rels))


def cube_vertex(key: CubeKey, sides: tuple[bool, ...], p: Presentation) -> Word:
    """Corner of a cube: sides[i] True picks the lhs of relation i."""
    contexts, rels = key
    w = contexts[0]
    for rel, use_lhs, ctx in zip(rels, sides, contexts[1:]):
        r = p.relations[rel]
        w = w + (r.lhs if use_lhs else r.rhs) + ctx
    return w


def cube_faces(key: CubeKey, p: Presentation) -> list[tuple[CubeKey, int, bool]]:
    """The 2n codimension-1 faces as (face key, collapsed coordinate, side)."""
    contexts, rels = key
    out = []
    for i, rel in enumerate(rels):
        r = p.relations[rel]
        for use_lhs in (True, False):
            side = r.lhs if use_lhs else r.rhs
            merged = contexts[i] + side + contexts[i + 1]
            face = (contexts[:i] + (merged,) + contexts[i + 2:], rels[:i] + rels[i + 1:])
            out.append((face, i, use_lhs))
    return out


def edge_key(e: RewriteEdge) -> CubeKey:
    return ((e.left, e.right), (e.relation.index,))


def edge_from_key(key: CubeKey, p: Presentation) -> RewriteEdge:
    (left, right), (rel,) = key
    return RewriteEdge(left, p.relations[rel], True, right)


@dataclass
class SquierComponent:
    presentation: Presentation
    base: Word
    vertices: list
    cubes: dict  # dimension -> list of keys (dimension >= 1)
    complete: bool
    budget_used: Budget
    parent: dict = field(default_factory=dict)  # BFS tree: word -> oriented edge into it

    @property
    def edges(self) -> list[RewriteEdge]:
        return [edge_from_key(k, self.presentation) for k in self.cubes.get(1, [])]

    @property
    def squares(self) -> list:
        return self.cubes.get(2, [])

    def count(self, dim: int) -> int:
        if dim == 0:
            return len(self.vertices)
        return len(self.cubes.get(dim, []))

    @property
    def dimension(self) -> int:
        return max([0] + [d for d, ks in self.cubes.items() if ks])

    def derivation_to(self, target: Word) -> list[RewriteEdge]:
        path = []
        cur = target
        while cur != self.base:
            e = self.parent[cur]
            path.append(e)
            cur = e.source
        path.reverse()
        return path


def _disjoint_families(apps, max_size):
    """Sets of pairwise disjoint applications of size >= 1, as sorted lists."""
    spans = sorted(apps)
    out = []

    def rec(start, last_end, chosen):
        if chosen:
            out.append(list(chosen))
        if len(chosen) == max_size:
            return
        for k in range(start, len(spans)):
            s, e, app = spans[k]
            if s >= last_end:
                chosen.append(app)
                rec(k + 1, e, chosen)
                chosen.pop()

    rec(0, 0, [])
    return out


def build_component(p: Presentation, w: Word, b: Budget, max_dim: int | None = None) -> SquierComponent:
    """BFS exploration of S(P, w) within the budget, with every cube whose
    corners were all reached. Cube dimension is capped by ``max_dim``, or by
    ``b.max_cells`` when not given (an n-cube is a thin diagram of n cells)."""
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
    seen = set(order)
    cubes: dict[int, set] = {}
    for u in order:
        apps = []
        for e in one_step_rewrites(p, u):
            s = len(e.left)
            apps.append((s, s + len(e.from_side), (s, e.relation.index, e.forward)))
        limit = min(len(u), b.max_cells if max_dim is None else max_dim)
        for fam in _disjoint_families(apps, limit):
            # enumerate each cube once, from its all-lhs corner
            if not all(fwd for _, _, fwd in fam):
                continue
            key = cube_key(u, fam, p)
            n = len(fam)
            if n > 1 and not all(
                cube_vertex(key, sides, p) in seen for sides in iproduct((True, False), repeat=n)
            ):
                continue
            if n == 1 and cube_vertex(key, (False,), p) not in seen:
                continue
            cubes.setdefault(n, set()).add(key)
    ordered = {d: sorted(ks, key=_cube_sort_key) for d, ks in sorted(cubes.items())}
    used = BudgetUsed(
        max_word_length=max(len(x) for x in order),
        max_words=len(order),
        max_cells=b.max_cells,
        max_depth=max(depth.values()),
    )
    tree = {v: e for v, e in parent.items() if e is not None}
    return SquierComponent(p, w, order, ordered, complete, used, tree)


def _cube_sort_key(key):
    contexts, rels = key
    return (sum(len(c) for c in contexts), tuple(len(c) for c in contexts), contexts, rels)


def euler_characteristic(c: SquierComponent) -> int:
    chi = len(c.vertices)
    for d, ks in c.cubes.items():
        chi += (-1) ** d * len(ks)
    return chi


# ---------------------------------------------------------------------------
# chain complex


def boundary_1(c: SquierComponent) -> list[dict]:
    """Columns of the edge boundary map: target - source (forward orientation)."""
    index = {v: i for i, v in enumerate(c.vertices)}
    cols = []
    for e in c.edges:
        cols.append({index[e.target]: 1, index[e.source]: -1} if e.source != e.target else {})
    return cols


def square_boundary(key: CubeKey, p: Presentation) -> list[tuple[CubeKey, int]]:
    """Signed edges of a square: e1[lhs] + e2[rhs] - e1[rhs] - e2[lhs],
    where e1 moves the first relation and e2 the second."""
    faces = {(i, side): f for f, i, side in cube_faces(key, p)}
    # face collapsing coordinate i keeps the other coordinate moving
    e2_at_lhs1 = faces[(0, True)]   # first relation fixed at lhs, second moves
    e2_at_rhs1 = faces[(0, False)]
    e1_at_lhs2 = faces[(1, True)]
    e1_at_rhs2 = faces[(1, False)]
    return [(e1_at_lhs2, 1), (e2_at_rhs1, 1), (e1_at_rhs2, -1), (e2_at_lhs1, -1)]


def boundary_2(c: SquierComponent) -> list[dict]:
    index = {k: i for i, k in enumerate(c.cubes.get(1, []))}
    cols = []
    for sq in c.squares:
        col: dict[int, int] = {}
        for ek, sign in square_boundary(sq, c.presentation):
            i = index[ek]
            col[i] = col.get(i, 0) + sign
        cols.append({i: v for i, v in col.items() if v})
    return cols


def rational_rank(columns: list[dict]) -> int:
    """Rank over Q of a sparse integer matrix given as {row: value} columns.

    Fraction-free elimination: each reduction step scales by the pivot and
    divides out the content, so entries stay integral and small.
    """
    pivots: dict[int, dict] = {}
    rank = 0
    for col in columns:
        v = {r: x for r, x in col.items() if x}
        while v:
            r = min(v)
            piv = pivots.get(r)
            if piv is None:
                pivots[r] = v
                rank += 1
                break
            a, b = piv[r], v[r]
            g = gcd(a, b)
            a, b = a // g, b // g
            nv = {rr: a * x for rr, x in v.items()}
            for rr, x in piv.items():
                y = nv.get(rr, 0) - b * x
                if y:
                    nv[rr] = y
                else:
                    nv.pop(rr, None)
            content = 0
            for x in nv.values():
                content = gcd(content, x)
                if content == 1:
                    break
            if content > 1:
                nv = {rr: x // content for rr, x in nv.items()}
            v = nv
    return rank


def _graph_rank(c: SquierComponent) -> int:
    """Rank of the edge boundary map: vertices minus connected components."""
    parent = {v: v for v in c.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    for e in c.edges:
        a, b = find(e.source), find(e.target)
        if a != b:
            parent[a] = b
            merges += 1
    return merges


def first_betti_number(c: SquierComponent) -> int:
    """dim H1 over Q of the explored subcomplex."""
    e = len(c.cubes.get(1, []))
    return e - _graph_rank(c) - rational_rank(boundary_2(c))


def betti_numbers(c: SquierComponent) -> list[int]:
    """Rational Betti numbers in every dimension of the explored subcomplex."""
    dims = c.dimension
    ranks = [0]
    for d in range(1, dims + 1):
        ranks.append(rational_rank(boundary_n(c, d)))
    ranks.append(0)
    out = []
    for d in range(dims + 1):
        out.append(c.count(d) - ranks[d] - ranks[d + 1])
    return out


def _cube_orientation_sign(i: int, use_lhs: bool) -> int:
    # d = sum_i (-1)^i (face at rhs - face at lhs)
    return (-1) ** i * (-1 if use_lhs else 1)


def boundary_n(c: SquierComponent, d: int) -> list[dict]:
    """Cellular boundary in dimension d with the product orientation of cubes."""
    if d == 1:
        return boundary_1(c)
    index = {k: i for i, k in enumerate(c.cubes.get(d - 1, []))}
    cols = []
    for key in c.cubes.get(d, []):
        col: dict[int, int] = {}
        for face, i, side in cube_faces(key, c.presentation):
            j = index[face]
            col[j] = col.get(j, 0) + _cube_orientation_sign(i, side)
        cols.append({j: v for j, v in col.items() if v})
    return cols


# ---------------------------------------------------------------------------
# fundamental group


@dataclass
class GroupPresentation:
    """Generators are opaque labels; relators are words of (generator, ±1)."""

    generators: list
    relators: list

    def __str__(self):
        if not self.generators:
            return "< | >"
        names = {g: f"x{i}" for i, g in enumerate(self.generators)}

        def fmt(r):
            return " ".join(names[g] + ("" if s > 0 else "^-1") for g, s in r) or "1"

        return "< " + ", ".join(names.values()) + " | " + ", ".join(fmt(r) for r in self.relators) + " >"

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def abelian_rank(self) -> int:
        index = {g: i for i, g in enumerate(self.generators)}
        cols = []
        for r in self.relators:
            col: dict[int, int] = {}
            for g, s in r:
                col[index[g]] = col.get(index[g], 0) + s
            cols.append({i: v for i, v in col.items() if v})
        return len(self.generators) - rational_rank(cols)


def pi1_presentation(c: SquierComponent, base: Word | None = None) -> GroupPresentation:
    """Spanning-tree presentation of π1(c, base); generators are the edge keys
    of non-tree edges, oriented forward."""
    base = c.base if base is None else base
    if base not in set(c.vertices):
        raise ValueError("base word is not a vertex of the component")
    tree = bfs_tree(c, base)
    gens = [k for k in c.cubes.get(1, []) if k not in tree]
    gen_set = set(gens)
    relators = []
    for sq in c.squares:
        rel = []
        for ek, sign in square_boundary(sq, c.presentation):
            if ek in gen_set:
                rel.append((ek, sign))
        relators.append(rel)
    return GroupPresentation(gens, relators)


def bfs_tree(c: SquierComponent, base: Word) -> set:
    """Edge keys of the BFS spanning tree from ``base`` (deterministic order)."""
    adj: dict[Word, list] = {v: [] for v in c.vertices}
    for k in c.cubes.get(1, []):
        e = edge_from_key(k, c.presentation)
        adj[e.source].append((e.target, k))
        adj[e.target].append((e.source, k))
    for v in adj:
        adj[v].sort(key=lambda x: _cube_sort_key(x[1]))
    seen = {base}
    tree = set()
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for v, k in adj[u]:
            if v not in seen:
                seen.add(v)
                tree.add(k)
                queue.append(v)
    return tree


def tree_paths(c: SquierComponent, base: Word) -> dict:
    """For every vertex, the oriented edge path from ``base`` along the BFS tree."""
    tree = bfs_tree(c, base)
    adj: dict[Word, list] = {v: [] for v in c.vertices}
    for k in tree:
        e = edge_from_key(k, c.presentation)
        adj[e.source].append(e)
        adj[e.target].append(e.reversed())
    paths = {base: []}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for e in sorted(adj[u], key=lambda e: e.sort_key()):
            if e.target not in paths:
                paths[e.target] = paths[u] + [e]
                queue.append(e.target)
    return paths


def generator_loops(c: SquierComponent, base: Word | None = None):
    """Yield (edge key, closed edge path at base) for each non-tree edge."""
    base = c.base if base is None else base
    paths = tree_paths(c, base)
    tree = bfs_tree(c, base)
    for k in c.cubes.get(1, []):
        if k in tree:
            continue
        e = edge_from_key(k, c.presentation)
        if e.source not in paths or e.target not in paths:
            continue
        back = [x.reversed() for x in reversed(paths[e.target])]
        yield k, paths[e.source] + [e] + back


def _free_reduce(word: list) -> list:
    out: list = []
    for g, s in word:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return out


def _cyclic_reduce(word: list) -> list:
    w = _free_reduce(word)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def _invert_word(word: list) -> list:
    return [(g, -s) for g, s in reversed(word)]


def simplify_presentation(g: GroupPresentation, b: Budget | None = None) -> GroupPresentation:
    """Bounded Tietze moves: cyclic free reduction, dropping empty relators,
    and eliminating a generator occurring exactly once in some relator."""
    b = b or Budget()
    gens = list(g.generators)
    rels = [_cyclic_reduce(r) for r in g.relators]
    rels = [r for r in rels if r]
    max_len = 50 * b.max_word_length
    for _ in range(b.max_words):
        choice = None
        for ri, r in enumerate(sorted(range(len(rels)), key=lambda i: len(rels[i]))):
            rel = rels[r]
            counts: dict = {}
            for x, _s in rel:
                counts[x] = counts.get(x, 0) + 1
            once = [x for x in gens if counts.get(x) == 1]
            if once:
                choice = (r, once[0])
                break
        if choice is None:
            break
        r, x = choice
        rel = rels[r]
        k = next(i for i, (y, _s) in enumerate(rel) if y == x)
        # rel = A x^s B  =>  x^s = A^-1 B^-1  (cyclically: x^s = (B A)^-1)
        s = rel[k][1]
        rest = rel[k + 1:] + rel[:k]
        value = _invert_word(rest) if s == 1 else rest
        new_rels = []
        too_long = False
        for i, other in enumerate(rels):
            if i == r:
                continue
            sub = []
            for y, t in other:
                if y == x:
                    sub.extend(value if t == 1 else _invert_word(value))
                else:
                    sub.append((y, t))
            sub = _cyclic_reduce(sub)
            if len(sub) > max_len:
                too_long = True
                break
            if sub:
                new_rels.append(sub)
        if too_long:
            break
        gens.remove(x)
        rels = new_rels
    return GroupPresentation(gens, rels)
