"""Triviality certificates from oriented rewriting.

If the relations reachable from ``w`` can be oriented (and, within a small
budget, completed) into a terminating and confluent system, Squier's
homotopy theorem says the loops closing critical pairs, together with the
squares of the Squier complex, generate π1 of every component. When each
such loop gives a diagram that reduces to ε, every D(P, w') with w' over the
reachable alphabet is trivial. This certifies triviality for infinite
classes, where exhaustive exploration cannot.

Derived rules carry a derivation in S(P), so every loop is a loop of the
original Squier complex and is checked as an honest diagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .diagrams import from_derivation, reduce
from .presentation import Presentation, RewriteEdge, Word, letter_closure, replay
from .verdict import Budget

MAX_DERIVED_RULES = 12


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word
    derivation: tuple  # edges from lhs to rhs, contexts relative to lhs

    @property
    def derived(self) -> bool:
        return len(self.derivation) != 1


@dataclass
class CriticalPair:
    peak: Word
    left: list  # edges from the peak to the common normal form
    right: list

    def loop(self) -> list[RewriteEdge]:
        return self.left + [e.reversed() for e in reversed(self.right)]


@dataclass
class CompletionCertificate:
    alphabet: tuple
    order: tuple
    rules: list
    critical_pairs: list


def _shortlex_greater(u: Word, v: Word, rank: dict) -> bool:
    if len(u) != len(v):
        return len(u) > len(v)
    return [rank[x] for x in u] > [rank[x] for x in v]


def orient(p: Presentation, alphabet, order) -> list[Rule]:
    rank = {x: i for i, x in enumerate(order)}
    rules = []
    for rel in p.relations:
        if not set(rel.lhs) | set(rel.rhs) <= set(alphabet):
            continue
        fwd = _shortlex_greater(rel.lhs, rel.rhs, rank)
        e = RewriteEdge((), rel, fwd, ())
        rules.append(Rule(e.source, e.target, (e,)))
    return rules


def _shift(e: RewriteEdge, left: Word, right: Word) -> RewriteEdge:
    return RewriteEdge(left + e.left, e.relation, e.forward, e.right + right)


def _apply(w: Word, pos: int, rule: Rule) -> list[RewriteEdge]:
    left, right = w[:pos], w[pos + len(rule.lhs):]
    return [_shift(e, left, right) for e in rule.derivation]


def normal_form(w: Word, rules: list[Rule], max_steps: int):
    """Leftmost reduction; returns (normal form, edges) or None if out of steps."""
    path: list = []
    for _ in range(max_steps):
        hit = None
        for pos in range(len(w)):
            for rule in rules:
                if w[pos:pos + len(rule.lhs)] == rule.lhs:
                    hit = (pos, rule)
                    break
            if hit:
                break
        if hit is None:
            return w, path
        pos, rule = hit
        path.extend(_apply(w, pos, rule))
        w = w[:pos] + rule.rhs + w[pos + len(rule.lhs):]
    return None


def critical_peaks(rules: list[Rule]):
    """Yield (peak, edges via rule i, edges via rule j) for every overlap and
    inclusion of left-hand sides."""
    for i, ri in enumerate(rules):
        for j, rj in enumerate(rules):
            li, lj = ri.lhs, rj.lhs
            for k in range(1, min(len(li), len(lj))):
                if li[len(li) - k:] == lj[:k]:
                    peak = li + lj[k:]
                    yield peak, _apply(peak, 0, ri), _apply(peak, len(li) - k, rj)
            for s in range(0, len(li) - len(lj) + 1):
                if (i, s) != (j, 0) and li[s:s + len(lj)] == lj:
                    yield li, _apply(li, 0, ri), _apply(li, s, rj)


def _target(w: Word, edges: list) -> Word:
    return edges[-1].target if edges else w


def _complete(rules: list[Rule], rank: dict, b: Budget):
    """Bounded completion; returns (rules, critical pairs) or None."""
    max_steps = b.max_depth * b.max_word_length
    rules = list(rules)
    added = 0
    while True:
        pairs = []
        new_rule = None
        for peak, e1, e2 in critical_peaks(rules):
            n1 = normal_form(_target(peak, e1), rules, max_steps)
            n2 = normal_form(_target(peak, e2), rules, max_steps)
            if n1 is None or n2 is None:
                return None
            left, right = e1 + n1[1], e2 + n2[1]
            if n1[0] == n2[0]:
                pairs.append(CriticalPair(peak, left, right))
                continue
            hi, lo = (left, right) if _shortlex_greater(n1[0], n2[0], rank) else (right, left)
            src = _target(peak, hi)
            derivation = [e.reversed() for e in reversed(hi)] + lo
            dst = _target(peak, lo)
            # contexts relative to the new rule's lhs are already absolute here
            new_rule = Rule(src, dst, tuple(derivation))
            break
        if new_rule is None:
            return rules, pairs
        if added >= MAX_DERIVED_RULES or len(new_rule.lhs) > b.max_word_length:
            return None
        rules.append(new_rule)
        added += 1


def certify_trivial(p: Presentation, w: Word, b: Budget | None = None) -> CompletionCertificate | None:
    """A certificate that D(P, w) = {1}, or None when the criterion does not apply."""
    b = b or Budget()
    sigma = letter_closure(p, w)
    letters = [x for x in p.alphabet if x in sigma]
    if len(letters) <= 5:
        orders = list(permutations(letters))
    else:
        orders = [tuple(letters), tuple(reversed(letters))]
    tried = set()
    for order in orders:
        rank = {x: i for i, x in enumerate(order)}
        base = orient(p, sigma, order)
        sig = tuple((r.lhs, r.rhs) for r in base)
        if sig in tried:
            continue
        tried.add(sig)
        done = _complete(base, rank, b)
        if done is None:
            continue
        rules, pairs = done
        if all(not reduce(from_derivation(p, cp.peak, cp.loop())).cell_count for cp in pairs):
            alphabet = tuple(x for x in p.alphabet if x in sigma)
            return CompletionCertificate(alphabet, tuple(order), rules, pairs)
    return None


def check_certificate(p: Presentation, w: Word, cert: CompletionCertificate, b: Budget | None = None) -> bool:
    """Independent check: rules are derivable, shortlex decreasing, include
    every reachable relation, and close all critical pairs with trivial loops."""
    b = b or Budget()
    if set(letter_closure(p, w)) != set(cert.alphabet):
        return False
    rank = {x: i for i, x in enumerate(cert.order)}
    if set(rank) != set(cert.alphabet):
        return False
    for r in cert.rules:
        if not _shortlex_greater(r.lhs, r.rhs, rank):
            return False
        try:
            if replay(r.lhs, list(r.derivation)) != r.rhs:
                return False
        except ValueError:
            return False
    present = {(r.lhs, r.rhs) for r in cert.rules}
    for rel in p.relations:
        if set(rel.lhs) <= set(cert.alphabet) and (rel.lhs, rel.rhs) not in present and (rel.rhs, rel.lhs) not in present:
            return False
    max_steps = b.max_depth * b.max_word_length
    for peak, e1, e2 in critical_peaks(cert.rules):
        n1 = normal_form(_target(peak, e1), cert.rules, max_steps)
        n2 = normal_form(_target(peak, e2), cert.rules, max_steps)
        if n1 is None or n2 is None or n1[0] != n2[0]:
            return False
        loop = CriticalPair(peak, e1 + n1[1], e2 + n2[1]).loop()
        if reduce(from_derivation(p, peak, loop)).cell_count:
            return False
    return True
