"""Independent reference computations used by the tests.

Everything here works on plain strings and sympy matrices and shares no
code with the package beyond reading relation pairs.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

import sympy


def relation_pairs(p) -> list[tuple[str, str]]:
    return [("".join(r.lhs), "".join(r.rhs)) for r in p.relations]


def occurrences(word: str, pattern: str) -> list[int]:
    return [i for i in range(len(word) - len(pattern) + 1) if word.startswith(pattern, i)]


def neighbours(pairs, word: str) -> list[tuple[int, int, bool, str]]:
    """(offset, relation, forward, result) for every single rewrite."""
    out = []
    for k, (u, v) in enumerate(pairs):
        for frm, to, fwd in ((u, v, True), (v, u, False)):
            for i in occurrences(word, frm):
                out.append((i, k, fwd, word[:i] + to + word[i + len(frm):]))
    return out


def brute_class(p, word: str, max_len: int) -> set[str]:
    """Words reachable from ``word`` through words of length at most max_len."""
    pairs = relation_pairs(p)
    seen = {word}
    queue = deque([word])
    while queue:
        u = queue.popleft()
        for _, _, _, v in neighbours(pairs, u):
            if len(v) <= max_len and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def brute_complex(p, words: set[str]):
    """Vertices, edges and squares of the 2-skeleton induced on ``words``.

    An edge is (left, relation, right) read at its lhs corner; a square is a
    pair of disjoint lhs occurrences, keyed by its all-lhs corner.
    """
    pairs = relation_pairs(p)
    verts = sorted(words)
    edges = set()
    squares = set()
    for u, v in pairs:
        for word in words:
            for i in occurrences(word, u):
                other = word[:i] + v + word[i + len(u):]
                if other in words:
                    edges.add((word[:i], pairs.index((u, v)), word[i + len(u):]))
    for word in words:
        occ = [(i, k) for k, (u, _) in enumerate(pairs) for i in occurrences(word, u)]
        for (i, k), (j, l) in combinations(sorted(occ), 2):
            if i + len(pairs[k][0]) > j:
                continue
            corners = [
                _swap(word, pairs, (i, k, a), (j, l, b)) for a in (False, True) for b in (False, True)
            ]
            if all(c in words for c in corners):
                squares.add((word, i, k, j, l))
    return verts, sorted(edges), sorted(squares)


def _swap(word, pairs, first, second):
    """Apply rhs substitutions to a subset of two disjoint lhs occurrences."""
    (i, k, a), (j, l, b) = first, second
    u1, v1 = pairs[k]
    u2, v2 = pairs[l]
    mid = word[i + len(u1):j]
    return word[:i] + (v1 if a else u1) + mid + (v2 if b else u2) + word[j + len(u2):]


def boundary_matrices(p, words: set[str]):
    """Integer matrices of ∂1 and ∂2 for the induced 2-complex."""
    pairs = relation_pairs(p)
    verts, edges, squares = brute_complex(p, words)
    vindex = {v: i for i, v in enumerate(verts)}
    eindex = {e: i for i, e in enumerate(edges)}
    d1 = sympy.zeros(len(verts), max(len(edges), 1))
    for j, (left, k, right) in enumerate(edges):
        u, v = pairs[k]
        d1[vindex[left + v + right], j] += 1
        d1[vindex[left + u + right], j] -= 1
    d2 = sympy.zeros(max(len(edges), 1), max(len(squares), 1))
    for s, (word, i, k, j, l) in enumerate(squares):
        u1, v1 = pairs[k]
        u2, v2 = pairs[l]
        pre, mid, post = word[:i], word[i + len(u1):j], word[j + len(u2):]
        # loop: move 1 at lhs of 2, move 2 at rhs of 1, back along 1 at rhs of 2, back along 2
        d2[eindex[(pre, k, mid + u2 + post)], s] += 1
        d2[eindex[(pre + v1 + mid, l, post)], s] += 1
        d2[eindex[(pre, k, mid + v2 + post)], s] -= 1
        d2[eindex[(pre + u1 + mid, l, post)], s] -= 1
    return verts, edges, squares, d1, d2


def _invariant_factors(m) -> list[int]:
    if m.rows == 0 or m.cols == 0 or all(x == 0 for x in m):
        return []
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(m, domain=sympy.ZZ)
    out = []
    for i in range(min(snf.rows, snf.cols)):
        if snf[i, i] != 0:
            out.append(abs(int(snf[i, i])))
    return out


def _rational_rank(m) -> int:
    from sympy.polys.matrices import DomainMatrix

    return DomainMatrix.from_Matrix(m).convert_to(sympy.QQ).rank()


def rational_b1(p, words: set[str]) -> int:
    """dim H1 over Q of the induced 2-complex; for complexes too big for Smith form."""
    verts, edges, squares, d1, d2 = boundary_matrices(p, words)
    if not edges:
        return 0
    return len(edges) - _rational_rank(d1) - (_rational_rank(d2) if squares else 0)


def integral_h1(p, words: set[str]) -> tuple[int, list[int]]:
    """(free rank, torsion coefficients) of H1 of the induced 2-complex."""
    verts, edges, squares, d1, d2 = boundary_matrices(p, words)
    if not edges:
        return 0, []
    rank1 = len(_invariant_factors(d1))
    f2 = _invariant_factors(d2) if squares else []
    free = len(edges) - rank1 - len(f2)
    return free, [x for x in f2 if x > 1]


def sink_cells(d) -> int:
    """Cells none of whose output edges is consumed later, by token tracking."""
    p = d.presentation
    owner = [None] * len(d.top)
    consumed = set()
    cells = 0
    for off, rel, fwd in d.steps():
        frm, to = p.relations[rel].sides(fwd)
        for t in owner[off:off + len(frm)]:
            if t is not None:
                consumed.add(t)
        owner[off:off + len(frm)] = [cells] * len(to)
        cells += 1
    return cells - len(consumed)


def all_reduced_diagrams(p, word: str, cells: int) -> set:
    """Reduced forms of every derivation of at most ``cells`` steps, filtered by size."""
    from diagram_groups.diagrams import Diagram, reduce

    pairs = relation_pairs(p)
    out = set()
    frontier = [(word, [])]
    for depth in range(cells + 1):
        nxt = []
        for w, steps in frontier:
            d = reduce(Diagram.from_steps(p, tuple(word), steps))
            if d.cell_count <= cells:
                out.add(d)
            if depth < cells:
                for off, k, fwd, v in neighbours(pairs, w):
                    nxt.append((v, steps + [(off, k, fwd)]))
        frontier = nxt
    return out


def bfs_distances(n: int, edges) -> list[list[int]]:
    adj = [[] for _ in range(n)]
    for i, j, *_ in edges:
        adj[i].append(j)
        adj[j].append(i)
    out = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        out.append(dist)
    return out


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        self.parent[self.find(x)] = self.find(y)


def edge_cut_sides(ball, removed: set[int]) -> list[int]:
    """Component label of each ball vertex after deleting the given edge indices."""
    uf = UnionFind(len(ball.vertices))
    for k, (i, j, _) in enumerate(ball.edges):
        if k not in removed:
            uf.union(i, j)
    return [uf.find(i) for i in range(len(ball.vertices))]


def parallel_classes(ball) -> list[set[int]]:
    """Edges of the ball grouped by the opposite-sides-of-a-square relation."""
    from diagram_groups.diagrams import atom_diagram, concatenate, reduce

    p = ball.presentation
    lookup = {}
    for k, (i, j, _) in enumerate(ball.edges):
        lookup[(i, j)] = k
        lookup[(j, i)] = k
    uf = UnionFind(len(ball.edges))
    for corner, atoms in ball.cubes:
        if len(atoms) != 2:
            continue
        a1, a2 = atoms
        d = ball.vertices[corner]
        x = ball.index[reduce(concatenate(d, atom_diagram(p, a1)))]
        y = ball.index[reduce(concatenate(d, atom_diagram(p, a2)))]
        far = [v for v in ball.cube_vertices(corner, atoms) if v.cell_count == d.cell_count + 2][0]
        z = ball.index[far]
        uf.union(lookup[(corner, x)], lookup[(y, z)])
        uf.union(lookup[(corner, y)], lookup[(x, z)])
    groups: dict[int, set[int]] = {}
    for k in range(len(ball.edges)):
        groups.setdefault(uf.find(k), set()).add(k)
    return list(groups.values())
