#!/usr/bin/env python3
"""Branching and table-size metrics across the random grammar corpus.

For every corpus grammar and every sentence of its language up to a length
bound, runs all five stack recognizers and the three chart builders, then
prints per-grammar averages: explored configurations and choice points for
the stack machines, item counts for the charts.  The point of interest is
how the choice-point column shrinks from dotted items to prefix items to
set items, and how the naive chart pays extra items for skipping the
per-cell merge.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cfrec.automata import recognize
from cfrec.grammar import augment, parse_grammar
from cfrec.oracle import sentences_up_to
from cfrec.random_grammars import random_validated_grammars
from cfrec.tabular import tabular_cp, tabular_elr

ALGOS = ("lc", "plr", "elr", "pseudo_elr", "cp")


def grammar_corpus(seed: int, count: int):
    repo = Path(__file__).resolve().parents[1]
    yield "g1", augment(parse_grammar((repo / "grammars" / "g1.cfg").read_text()))
    yield "overlap", augment(parse_grammar((repo / "grammars" / "overlap.cfg").read_text()))
    for k, g in enumerate(random_validated_grammars(seed, count)):
        yield f"rand{k:02d}", augment(g)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--count", type=int, default=10, help="number of random grammars")
    ap.add_argument("--max-len", type=int, default=5, help="sentence length bound")
    args = ap.parse_args()

    header = ("grammar", "sents") + tuple(f"{a}:cfg/cp" for a in ALGOS) + ("tab-cp", "tab-elr", "tab-naive")
    rows = [header]
    for name, g in grammar_corpus(args.seed, args.count):
        sentences = sorted(sentences_up_to(g, args.max_len), key=lambda s: (len(s), s))
        if not sentences:
            continue
        totals = {a: [0, 0] for a in ALGOS}
        items = {"cp": 0, "elr": 0, "naive": 0}
        for s in sentences:
            for a in ALGOS:
                res = recognize(a, g, s)
                totals[a][0] += res.configurations_explored
                totals[a][1] += res.choice_points
            items["cp"] += tabular_cp(g, s).items_added
            items["elr"] += tabular_elr(g, s, variant="merged").items_added
            items["naive"] += tabular_elr(g, s, variant="naive").items_added
        k = len(sentences)
        row = (name, str(k))
        row += tuple(f"{totals[a][0] / k:.1f}/{totals[a][1] / k:.1f}" for a in ALGOS)
        row += tuple(f"{items[key] / k:.1f}" for key in ("cp", "elr", "naive"))
        rows.append(row)

    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    for r in rows:
        print("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(r)).rstrip())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
