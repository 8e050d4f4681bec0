"""The nine acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
PASS/FAIL per criterion.
"""

import itertools
import random
import time

import pytest

from diagram_groups import Budget, Status
from diagram_groups.diagrams import (
    concatenate,
    from_derivation,
    group_product,
    invert,
    is_prefix,
    is_reduced,
    random_derivation,
    reduce,
    trivial_diagram,
)
from diagram_groups.farley import (
    build_ball,
    combinatorial_distance,
    hyperplane_of_edge,
    median_diagram,
)
from diagram_groups.freeness import (
    NontrivialityOracle,
    factor_budget,
    freeness_verdict,
    z2_witness_problems,
)
from diagram_groups.pathology import (
    check_self_intersection,
    self_intersection_search,
    two_sidedness_check,
)
from diagram_groups.presentation import explore_class, replay
from diagram_groups.squier import (
    build_component,
    euler_characteristic,
    first_betti_number,
    pi1_presentation,
    simplify_presentation,
)

from oracles import (
    bfs_distances,
    brute_class,
    edge_cut_sides,
    integral_h1,
    parallel_classes,
)

B = Budget()


def test_c1_abc_component_and_rank(commuting, criterion):
    criterion("1. commuting abc: V=6 E=6 S=0, b1=1, Free of rank 1 in under 1 s")
    start = time.perf_counter()
    w = commuting.word("abc")
    c = build_component(commuting, w, B)
    report = freeness_verdict(commuting, w, B)
    elapsed = time.perf_counter() - start
    print(f"abc: V={c.count(0)} E={c.count(1)} S={c.count(2)} b1={first_betti_number(c)} "
          f"verdict={report.verdict} rank={report.rank_estimate} t={elapsed:.3f}s")
    assert c.complete
    assert (c.count(0), c.count(1), c.count(2)) == (6, 6, 0)
    assert first_betti_number(c) == 1
    assert report.verdict == "Free"
    assert report.rank_estimate == 1
    assert elapsed < 1.0


def test_c2_abbc_rank_two_against_smith_form(commuting, criterion):
    criterion("2. commuting abbc: complete, 12 vertices, b1=2 matching Smith normal form")
    w = commuting.word("abbc")
    c = build_component(commuting, w, B)
    free, torsion = integral_h1(commuting, brute_class(commuting, "abbc", 4))
    print(f"abbc: V={c.count(0)} b1={first_betti_number(c)} smith=({free}, {torsion})")
    assert c.complete
    assert c.count(0) == 12  # 4!/2! arrangements
    assert first_betti_number(c) == 2
    assert (free, torsion) == (2, [])


def test_c3_bbcc_simply_connected(commuting, criterion):
    criterion("3. commuting bbcc: chi=1, b1=0, pi1 simplifies to the trivial group")
    w = commuting.word("bbcc")
    c = build_component(commuting, w, B)
    g = simplify_presentation(pi1_presentation(c, w), B)
    print(f"bbcc: chi={euler_characteristic(c)} b1={first_betti_number(c)} pi1={g}")
    assert c.complete
    assert euler_characteristic(c) == 1
    assert first_betti_number(c) == 0
    assert g.is_trivial


def test_c4_truncations_grow_without_bound(absorbs, criterion):
    criterion("4. ab=a, abb=a at a: truncation to ab^n (n<=N) has b1=N-1 for N=2..8")
    w = absorbs.word("a")
    rows = []
    for n in range(2, 9):
        c = build_component(absorbs, w, B.scaled(max_word_length=n + 1))
        rows.append((n, c.count(0), c.count(1), c.count(2), first_betti_number(c)))
        assert set(c.vertices) == {("a",) + ("b",) * k for k in range(n + 1)}
        assert (c.count(0), c.count(1), c.count(2)) == (n + 1, 2 * n - 1, 0)
        assert first_betti_number(c) == n - 1
    print("N, V, E, S, b1:", rows)


def test_c5_absorbing_letter_has_rank_two_evidence(absorbing_p, criterion):
    criterion("5. absorbing p at abc: every split of ap^n b p^m c (n,m<=4) has a trivial side; b1 settles at 2")
    p = absorbing_p
    w = p.word("abc")
    cls = explore_class(p, w, B.scaled(max_word_length=11))
    oracle = NontrivialityOracle(p, factor_budget(B))
    checked = 0
    for n, m in itertools.product(range(5), repeat=2):
        member = p.word("a" + "p" * n + "b" + "p" * m + "c")
        assert member in cls.words
        for cut in range(1, len(member)):
            left, right = oracle.status(member[:cut]), oracle.status(member[cut:])
            assert Status.REFUTED in (left, right), (member, cut, left, right)
            checked += 1
    report = freeness_verdict(p, w, B)
    b1s = [row[4] for row in report.truncation_table]
    oracle_b1 = [integral_h1(p, brute_class(p, "abc", row[0]))[0] for row in report.truncation_table[-2:]]
    print(f"splits checked: {checked}; truncation b1: {b1s}; oracle on last two: {oracle_b1}")
    assert report.dimension_one_evidence
    assert report.verdict != "NotFree"
    assert b1s[-2:] == [2, 2]
    assert oracle_b1 == [2, 2]


@pytest.mark.parametrize("name, word", [("free_1", "ac"), ("free_2", "ab"), ("free_3", "a")])
def test_c6_free_family_has_dimension_one_evidence(free_family, criterion, name, word):
    criterion(f"6. {name} at {word}: dimension-1 evidence, no Z^2 witness")
    p = free_family[name]
    report = freeness_verdict(p, p.word(word), B)
    print(f"{name} {word}: verdict={report.verdict} evidence={report.dimension_one_evidence} "
          f"members={report.members_surveyed} splits={report.splits_checked}")
    assert report.dimension_one_evidence
    assert report.z2_witness is None
    assert report.verdict != "NotFree"


def test_c7_commuting_pair_detected(commuting, criterion):
    criterion("7. commuting aabbcc: NotFree with a replayable Z^2 witness in under 10 s")
    start = time.perf_counter()
    w = commuting.word("aabbcc")
    report = freeness_verdict(commuting, w, B)
    elapsed = time.perf_counter() - start
    assert report.verdict == "NotFree"
    z = report.z2_witness
    assert z is not None
    assert z2_witness_problems(commuting, z) == []
    assert replay(w, z.split.derivation) == z.split.ambient
    assert group_product(z.a, z.b) == group_product(z.b, z.a)
    assert group_product(z.a, z.b) != trivial_diagram(commuting, w)
    print(f"aabbcc: split {[commuting.format_word(f) for f in z.split.factors]} t={elapsed:.2f}s")
    assert elapsed < 10.0


def _random_loops(p, w, count, rng):
    """Spherical diagrams: a random walk followed by the BFS path back to w."""
    cls = explore_class(p, w, B)
    out = []
    while len(out) < count:
        d = random_derivation(p, w, rng.randint(1, 8), rng)
        back = [e.reversed() for e in reversed(cls.derivation_to(d.bottom))]
        out.append(reduce(concatenate(d, from_derivation(p, d.bottom, back))))
    return out


def test_c8_calculus_invariants(abelian3, criterion):
    criterion("8. calculus: confluence, group laws, distance, medians, halfspaces with zero violations")
    p = abelian3
    rng = random.Random(20240607)
    violations: dict[str, int] = {}

    def bad(kind):
        violations[kind] = violations.get(kind, 0) + 1

    # dipole reduction gives one normal form whatever the order
    words = ["aabc", "abcabc", "aabbc", "abc"]
    for k in range(200):
        w = p.word(rng.choice(words))
        x = random_derivation(p, w, rng.randint(1, 10), rng)
        y = random_derivation(p, x.bottom, rng.randint(0, 6), rng)
        d = concatenate(concatenate(x, y), concatenate(invert(y), random_derivation(p, x.bottom, rng.randint(0, 4), rng)))
        forms = {reduce(d)} | {reduce(d, random.Random(k * 7 + s)) for s in range(3)}
        if len(forms) != 1 or not is_reduced(forms.pop()):
            bad("confluence")

    # group laws at aabc
    w = p.word("aabc")
    e = trivial_diagram(p, w)
    loops = _random_loops(p, w, 24, rng)
    for x, y, z in zip(loops, loops[1:], loops[2:]):
        if group_product(group_product(x, y), z) != group_product(x, group_product(y, z)):
            bad("associativity")
    for x in loops:
        if group_product(x, e) != x or group_product(e, x) != x:
            bad("identity")
        if group_product(x, invert(x)) != e or group_product(invert(x), x) != e:
            bad("inverse")

    # distance equals cell count of the quotient, against BFS in the ball
    ball = build_ball(p, w, 3)
    verts = ball.vertices
    bfs = bfs_distances(len(verts), ball.edges)
    for i, j in itertools.product(range(len(verts)), repeat=2):
        if combinatorial_distance(verts[i], verts[j]) != bfs[i][j]:
            bad("distance")

    # medians exist and are unique; a ball big enough to hold every candidate is scanned
    dist = {}

    def d(x, y):
        if (x, y) not in dist:
            dist[(x, y)] = dist[(y, x)] = combinatorial_distance(x, y)
        return dist[(x, y)]

    triples = list(itertools.combinations_with_replacement(verts, 3))
    reach = max(min(a.cell_count + (d(a, b) + d(a, c) - d(b, c)) // 2 for a, b, c in
                    ((x, y, z), (y, x, z), (z, x, y))) for x, y, z in triples)
    scan = build_ball(p, w, reach).vertices
    for a, b, c in triples:
        m = median_diagram(a, b, c)
        ok = d(a, m) + d(m, b) == d(a, b) and d(a, m) + d(m, c) == d(a, c) and d(b, m) + d(m, c) == d(b, c)
        found = [x for x in scan
                 if d(a, x) + d(x, b) == d(a, b) and d(a, x) + d(x, c) == d(a, c) and d(b, x) + d(x, c) == d(b, c)]
        if not ok or found != [m]:
            bad("median")

    # the plus halfspace of each hyperplane is its minimal diagram's up-set
    classes = parallel_classes(ball)
    for cls in classes:
        hs = {hyperplane_of_edge(verts[ball.edges[k][0]], ball.edges[k][2]) for k in cls}
        if len(hs) != 1:
            bad("hyperplane")
            continue
        (h,) = hs
        side = edge_cut_sides(ball, cls)
        plus = {i for i in range(len(verts)) if side[i] != side[0]}
        if len(set(side)) != 2 or plus != {i for i, v in enumerate(verts) if is_prefix(h.minimal_diagram, v)}:
            bad("halfspace")

    print(f"ball: {len(verts)} vertices, {len(classes)} hyperplanes, {len(triples)} triples; "
          f"violations: {violations or 'none'}")
    assert violations == {}


def test_c9_pathologies(commuting, free_family, self_crossing, criterion):
    criterion("9. pathologies: hyperplanes 2-sided on complete components; self-intersection refuted and exhibited")
    complete = [
        (commuting, "abc"), (commuting, "abbc"), (commuting, "bbcc"), (commuting, "aabbcc"),
        (free_family["free_2"], "pq"), (free_family["free_3"], "xy"),
    ]
    for p, word in complete:
        c = build_component(p, p.word(word), B)
        assert c.complete, word
        assert two_sidedness_check(c).status is Status.PROVED, word

    c = build_component(commuting, commuting.word("abc"), B)
    assert self_intersection_search(commuting, c, B).status is Status.REFUTED

    small = B.scaled(max_words=300)
    w = self_crossing.word("appa")
    c = build_component(self_crossing, w, small)
    v = self_intersection_search(self_crossing, c, small)
    assert v.status is Status.PROVED
    s = v.certificate
    assert check_self_intersection(self_crossing, s)
    pw = s.edge.from_side
    assert replay(s.a, s.left_derivation) == s.a + pw + s.b
    assert replay(s.c, s.right_derivation) == s.b + pw + s.c
    print(f"self-intersection at a={s.a} b={s.b} c={s.c} on edge {s.edge}")
