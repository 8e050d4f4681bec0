"""Triviality, algebraic dimension and freeness of diagram groups.

D(P, w) contains ℤ^n iff some w' = w modulo P splits as w1...wn with every
D(P, wi) non-trivial, and D(P, w) is free iff it contains no ℤ². So freeness
reduces to deciding triviality of the factor groups over the class of w.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .completion import certify_trivial
from .diagrams import (
    Diagram,
    concatenate,
    from_derivation,
    group_product,
    invert,
    is_reduced,
    reduce,
    split_as_sum,
    sum_diagrams,
    trivial_diagram,
)
from .presentation import ClassExploration, Presentation, Word, explore_class, letter_closure, replay
from .squier import (
    build_component,
    first_betti_number,
    generator_loops,
    pi1_presentation,
    simplify_presentation,
)
from .verdict import Budget, Status, Verdict

LOOP_CAP_INCOMPLETE = 64


def factor_budget(b: Budget) -> Budget:
    """Budget for factor groups met while surveying splits."""
    return b.scaled(max_words=max(500, b.max_words // 10))


def survey_cap(b: Budget) -> int:
    """Class members whose splits are surveyed, in BFS order."""
    return max(50, b.max_words // 20)


class NontrivialityOracle:
    """group_nontrivial with memoisation.

    Verdicts are shared across an explored component (all its vertices have
    isomorphic groups) and triviality certificates across words with the
    same reachable alphabet.
    """

    def __init__(self, p: Presentation, b: Budget):
        self.p = p
        self.b = b
        self._by_word: dict = {}
        self._by_alphabet: dict = {}
        self._closure: dict = {}
        # word -> (representative, derivation from representative to word)
        self._classmate: dict = {}

    def status(self, w: Word) -> Status:
        if w in self._by_word:
            return self._by_word[w].status
        if w in self._classmate:
            return self._by_word[self._classmate[w][0]].status
        return self.check(w).status

    def check(self, w: Word) -> Verdict:
        if w in self._by_word:
            return self._by_word[w]
        if w in self._classmate:
            v = self._transport(w)
            self._by_word[w] = v
            return v
        v = self._decide(w)
        self._by_word[w] = v
        return v

    def _transport(self, w: Word) -> Verdict:
        rep, path = self._classmate[w]
        src = self._by_word[rep]
        if src.proved:
            gamma = from_derivation(self.p, rep, path)
            d = reduce(concatenate(concatenate(invert(gamma), src.certificate["diagram"]), gamma))
            cert = {"kind": "conjugated", "diagram": d, "from": rep, "derivation": path}
            return Verdict(Status.PROVED, cert, src.budget_used)
        if src.refuted:
            cert = {"kind": "classmate", "of": rep, "derivation": path, "source": src.certificate}
            return Verdict(Status.REFUTED, cert, src.budget_used)
        return Verdict(Status.UNKNOWN, None, src.budget_used, notes={"classmate_of": rep})

    def _decide(self, w: Word) -> Verdict:
        p, b = self.p, self.b
        letters = frozenset(w)
        if letters not in self._closure:
            self._closure[letters] = letter_closure(p, letters)
        sigma = self._closure[letters]
        if sigma not in self._by_alphabet:
            self._by_alphabet[sigma] = certify_trivial(p, w, b)
        cert = self._by_alphabet[sigma]
        if cert is not None:
            return Verdict(Status.REFUTED, {"kind": "critical-pairs", "certificate": cert})
        c = build_component(p, w, b, max_dim=2)
        found = None
        all_trivial = True
        for n, (key, loop) in enumerate(generator_loops(c, w)):
            if not c.complete and n >= LOOP_CAP_INCOMPLETE:
                all_trivial = False
                break
            d = reduce(from_derivation(p, w, loop))
            if d.cell_count:
                found = (key, loop, d)
                break
        for v in c.vertices:
            if v != w and v not in self._by_word and v not in self._classmate:
                self._classmate[v] = (w, c.derivation_to(v))
        if found is not None:
            key, loop, d = found
            return Verdict(
                Status.PROVED, {"kind": "loop", "diagram": d, "loop": loop, "edge": key}, c.budget_used
            )
        if c.complete and all_trivial:
            g = simplify_presentation(pi1_presentation(c, w), b)
            return Verdict(
                Status.REFUTED,
                {
                    "kind": "complete-component",
                    "vertices": len(c.vertices),
                    "edges": c.count(1),
                    "squares": c.count(2),
                    "tietze_trivial": g.is_trivial,
                },
                c.budget_used,
            )
        return Verdict(
            Status.UNKNOWN, None, c.budget_used,
            notes={"complete": c.complete, "explored": len(c.vertices)},
        )


def group_nontrivial(p: Presentation, w: Word, b: Budget) -> Verdict:
    """Proved: a reduced spherical diagram ≠ ε(w). Refuted: D(P, w) = {1}."""
    return NontrivialityOracle(p, b).check(w)


def check_nontrivial(p: Presentation, w: Word, d: Diagram) -> bool:
    return d.top == w and d.bottom == w and d.cell_count > 0 and is_reduced(d)


# ---------------------------------------------------------------------------
# splits and algebraic dimension


@dataclass
class SplitWitness:
    base: Word
    ambient: Word  # member of [base] equal to the concatenation of factors
    derivation: list  # base -> ambient
    factors: list
    certificates: list  # reduced non-trivial spherical diagram per factor


@dataclass
class SplitRecord:
    member: Word
    cut: int
    left: Status
    right: Status | None  # None when the left factor was already trivial

    @property
    def has_trivial_side(self) -> bool:
        return self.left is Status.REFUTED or self.right is Status.REFUTED

    @property
    def both_nontrivial(self) -> bool:
        return self.left is Status.PROVED and self.right is Status.PROVED


@dataclass
class SplitSurvey:
    exploration: ClassExploration
    records: list
    members_surveyed: int

    @property
    def exhaustive(self) -> bool:
        """Every member of the (complete) class was surveyed."""
        return self.exploration.complete and self.members_surveyed == len(self.exploration.order)

    @property
    def dimension_one_evidence(self) -> bool:
        return all(r.has_trivial_side for r in self.records)

    @property
    def two_splits(self) -> list:
        return [r for r in self.records if r.both_nontrivial]


def survey_splits(p: Presentation, w: Word, b: Budget, oracle: NontrivialityOracle | None = None,
                  max_members: int | None = None, stop_at_first: bool = False) -> SplitSurvey:
    """Classify every 2-split of the first explored members of [w]."""
    oracle = oracle or NontrivialityOracle(p, factor_budget(b))
    cap = survey_cap(b) if max_members is None else max_members
    cls = explore_class(p, w, b)
    records = []
    members = cls.order[:cap]
    for k, member in enumerate(members):
        for cut in range(1, len(member)):
            left = oracle.status(member[:cut])
            right = None if left is Status.REFUTED else oracle.status(member[cut:])
            rec = SplitRecord(member, cut, left, right)
            records.append(rec)
            if stop_at_first and rec.both_nontrivial:
                return SplitSurvey(cls, records, k + 1)
    return SplitSurvey(cls, records, len(members))


def _split_witness(p, w, cls, member, cuts, oracle) -> SplitWitness:
    bounds = [0, *cuts, len(member)]
    factors = [member[a:z] for a, z in zip(bounds, bounds[1:])]
    certs = [oracle.check(f).certificate["diagram"] for f in factors]
    return SplitWitness(w, member, cls.derivation_to(member), factors, certs)


def _max_split(member: Word, oracle, max_pieces: int):
    """Longest factorisation of member into non-trivial factors, as cut list."""
    n = len(member)
    best: list = [None] * (n + 1)
    best[0] = []
    for j in range(1, n + 1):
        for i in range(j):
            if best[i] is None or len(best[i]) >= max_pieces:
                continue
            if oracle.status(member[i:j]) is not Status.PROVED:
                continue
            cand = best[i] + [i]
            if best[j] is None or len(cand) > len(best[j]):
                best[j] = cand
    if best[n] is None:
        return None
    return best[n][1:]


def algebraic_dimension_lower_bound(p: Presentation, w: Word, b: Budget,
                                    oracle: NontrivialityOracle | None = None,
                                    survey: SplitSurvey | None = None,
                                    max_members: int = 20):
    """(n, witness): the largest n found with w' = w1...wn, all D(P, wi) ≠ 1.

    n = 1 comes with no witness and needs D(P, w) ≠ 1 proved; otherwise n = 0.
    """
    oracle = oracle or NontrivialityOracle(p, factor_budget(b))
    survey = survey or survey_splits(p, w, b, oracle)
    members = []
    for r in survey.two_splits:
        if r.member not in members:
            members.append(r.member)
    if not members:
        return (1 if oracle.check(w).proved else 0), None
    best_n, best = 1, None
    for member in members[:max_members]:
        cuts = _max_split(member, oracle, len(member))
        if cuts is not None and len(cuts) + 1 > best_n:
            best_n, best = len(cuts) + 1, (member, cuts)
    if best is None:
        r = survey.two_splits[0]
        best_n, best = 2, (r.member, [r.cut])
    member, cuts = best
    return best_n, _split_witness(p, w, survey.exploration, member, cuts, oracle)


# ---------------------------------------------------------------------------
# ℤ² witnesses


@dataclass
class Z2Witness:
    split: SplitWitness
    gamma: Diagram  # (base, ambient)-diagram of the split's derivation
    a: Diagram
    b: Diagram


def _embed(p: Presentation, s: SplitWitness, k: int, gamma: Diagram) -> Diagram:
    parts = [
        s.certificates[i] if i == k else trivial_diagram(p, f) for i, f in enumerate(s.factors)
    ]
    inner = parts[0]
    for d in parts[1:]:
        inner = sum_diagrams(inner, d)
    return reduce(concatenate(concatenate(gamma, inner), invert(gamma)))


def build_z2_witness(p: Presentation, s: SplitWitness) -> Z2Witness:
    """Commuting pair from the first two factors of a split (others padded by ε)."""
    if len(s.factors) < 2:
        raise ValueError("a ℤ² witness needs at least two factors")
    for f, d in zip(s.factors, s.certificates):
        if not check_nontrivial(p, f, d):
            raise ValueError("factor certificate is not a reduced non-trivial spherical diagram")
    if replay(s.base, s.derivation) != s.ambient:
        raise ValueError("split derivation does not reach the ambient word")
    if tuple(x for f in s.factors for x in f) != s.ambient:
        raise ValueError("factors do not concatenate to the ambient word")
    gamma = from_derivation(p, s.base, s.derivation)
    z = Z2Witness(s, gamma, _embed(p, s, 0, gamma), _embed(p, s, 1, gamma))
    problems = z2_witness_problems(p, z)
    if problems:
        raise ValueError("; ".join(problems))
    return z


def z2_witness_problems(p: Presentation, z: Z2Witness) -> list[str]:
    """Replay a ℤ² witness; an empty list means every check passed."""
    out = []
    base = z.split.base
    e = trivial_diagram(p, base)
    for name, d in (("A", z.a), ("B", z.b)):
        if d.top != base or d.bottom != base:
            out.append(f"{name} is not spherical with the base word")
            return out
        if not is_reduced(d):
            out.append(f"{name} is not reduced")
    s = z.split
    if z.gamma.top != base or z.gamma.bottom != s.ambient:
        out.append("gamma does not run from the base to the split word")
        return out
    # conjugated back, A lives on the first factor and B on the second; two
    # non-trivial elements with disjoint supports generate ℤ² in a torsion-free group
    cuts = []
    for f in s.factors[:-1]:
        cuts.append((cuts[-1] if cuts else 0) + len(f))
    for name, d, k in (("A", z.a, 0), ("B", z.b, 1)):
        parts = split_as_sum(reduce(concatenate(concatenate(invert(z.gamma), d), z.gamma)), cuts)
        if parts is None:
            out.append(f"{name} does not split along the factors")
        elif [i for i, x in enumerate(parts) if x.cell_count] != [k]:
            out.append(f"{name} is not supported on factor {k + 1} alone")
    ab = group_product(z.a, z.b)
    ba = group_product(z.b, z.a)
    if ab != ba:
        out.append("A and B do not commute")
    if z.a == e:
        out.append("A is trivial")
    if z.b == e:
        out.append("B is trivial")
    if group_product(z.a, invert(z.b)) == e:
        out.append("A equals B")
    if group_product(z.a, z.a) == e or group_product(z.b, z.b) == e:
        out.append("A or B has order two")
    return out


# ---------------------------------------------------------------------------
# freeness report


@dataclass
class FreenessReport:
    word: Word
    verdict: str  # "Free", "NotFree" or "Unknown"
    dimension_lower_bound: int
    rank_estimate: object  # int, "unbounded-growth" or None
    dimension_one_evidence: bool
    class_complete: bool
    class_size: int
    members_surveyed: int
    splits_checked: int
    truncation_table: list = field(default_factory=list)  # (max length, V, E, squares, b1)
    split_witness: SplitWitness | None = None
    z2_witness: Z2Witness | None = None
    notes: list = field(default_factory=list)


def truncation_table(p: Presentation, w: Word, b: Budget, steps: int = 8) -> list:
    rows = []
    top = min(b.max_word_length, len(w) + steps)
    for length in range(len(w) + 1, top + 1):
        c = build_component(p, w, factor_budget(b).scaled(max_word_length=length), max_dim=2)
        rows.append((length, len(c.vertices), c.count(1), c.count(2), first_betti_number(c)))
    return rows


def _rank_from_table(rows: list):
    b1s = [r[4] for r in rows]
    if len(b1s) >= 2 and b1s[-1] == b1s[-2]:
        return b1s[-1]
    tail = b1s[-3:]
    if len(tail) == 3 and tail[0] < tail[1] < tail[2]:
        return "unbounded-growth"
    return None


def freeness_verdict(p: Presentation, w: Word, b: Budget) -> FreenessReport:
    oracle = NontrivialityOracle(p, factor_budget(b))
    survey = survey_splits(p, w, b, oracle)
    cls = survey.exploration
    n, split = algebraic_dimension_lower_bound(p, w, b, oracle, survey)
    common = dict(
        word=w,
        dimension_lower_bound=n,
        dimension_one_evidence=survey.dimension_one_evidence,
        class_complete=cls.complete,
        class_size=len(cls.order),
        members_surveyed=survey.members_surveyed,
        splits_checked=len(survey.records),
    )
    hyperbolic = "for a finitely generated diagram group this also decides hyperbolicity (free iff hyperbolic); finite generation is not checked"
    if split is not None:
        z = build_z2_witness(p, split)
        return FreenessReport(
            verdict="NotFree", rank_estimate=None, split_witness=split, z2_witness=z,
            notes=[f"contains ℤ^{n}", hyperbolic], **common,
        )
    if survey.exhaustive and survey.dimension_one_evidence:
        c = build_component(p, w, b)
        rank = first_betti_number(c) if c.complete else None
        return FreenessReport(
            verdict="Free", rank_estimate=rank,
            notes=["every split of every class member has a trivial factor", hyperbolic], **common,
        )
    notes = []
    if cls.complete and not survey.exhaustive:
        notes.append(f"splits surveyed on {survey.members_surveyed} of {len(cls.order)} class members")
    if not cls.complete:
        notes.append("class not exhausted within budget; freeness needs a manual lemma on the shape of the class")
    if survey.dimension_one_evidence:
        notes.append("dimension-1 evidence: every explored split has a factor certified trivial")
    else:
        open_ = sum(1 for r in survey.records if not r.has_trivial_side)
        notes.append(f"{open_} explored splits have no factor certified trivial")
    rows = truncation_table(p, w, b) if not cls.complete else []
    rank = _rank_from_table(rows) if rows else None
    return FreenessReport(verdict="Unknown", rank_estimate=rank, truncation_table=rows, notes=notes, **common)


__all__ = [
    "FreenessReport",
    "NontrivialityOracle",
    "SplitRecord",
    "SplitSurvey",
    "SplitWitness",
    "Z2Witness",
    "algebraic_dimension_lower_bound",
    "build_z2_witness",
    "check_nontrivial",
    "factor_budget",
    "freeness_verdict",
    "group_nontrivial",
    "survey_splits",
    "truncation_table",
    "z2_witness_problems",
]
