"""b1 of the length-truncated component as the length cap grows.

A plateau suggests the rank of a free group; steady growth suggests
infinite rank.

    python scripts/truncation_growth.py presentations/absorbing_p.txt abc --steps 6
"""

import argparse
from pathlib import Path

from diagram_groups import Budget
from diagram_groups.freeness import truncation_table
from diagram_groups.presentation import parse_presentation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("presentation", type=Path)
    ap.add_argument("word")
    ap.add_argument("--steps", type=int, default=6)
    args = ap.parse_args()
    p = parse_presentation(args.presentation.read_text())
    rows = truncation_table(p, p.word(args.word), Budget(), steps=args.steps)
    print(f"{'max len':>8}{'V':>8}{'E':>8}{'squares':>9}{'b1':>6}")
    for length, v, e, sq, b1 in rows:
        print(f"{length:>8}{v:>8}{e:>8}{sq:>9}{b1:>6}")


if __name__ == "__main__":
    main()
