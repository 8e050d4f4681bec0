"""Freeness verdicts for the bundled presentations.

    python scripts/example_table.py [--max-words N]
"""

import argparse
import time
from pathlib import Path

from diagram_groups import Budget
from diagram_groups.freeness import freeness_verdict
from diagram_groups.presentation import parse_presentation

ROOT = Path(__file__).resolve().parent.parent / "presentations"

CASES = [
    ("commuting", "abc"),
    ("commuting", "abbc"),
    ("commuting", "bbcc"),
    ("commuting", "abcabc"),
    ("commuting", "aabbcc"),
    ("free_1", "ac"),
    ("free_2", "ab"),
    ("free_3", "a"),
    ("a_absorbs_b", "a"),
    ("absorbing_p", "abc"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-words", type=int, default=Budget().max_words)
    args = ap.parse_args()
    budget = Budget().scaled(max_words=args.max_words)
    print(f"{'presentation':<14}{'word':<8}{'verdict':<9}{'dim>=':<7}{'rank':<18}{'class':<8}{'secs':>6}")
    for name, word in CASES:
        p = parse_presentation((ROOT / f"{name}.txt").read_text())
        t = time.perf_counter()
        r = freeness_verdict(p, p.word(word), budget)
        dt = time.perf_counter() - t
        size = str(r.class_size) + ("" if r.class_complete else "+")
        print(f"{name:<14}{word:<8}{r.verdict:<9}{r.dimension_lower_bound:<7}{str(r.rank_estimate):<18}{size:<8}{dt:>6.2f}")


if __name__ == "__main__":
    main()
