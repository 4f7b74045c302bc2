#!/usr/bin/env python3
"""Walkthrough on the expression grammar: traces, charts, and metrics.

Shows the shortest accepting run of each stack recognizer on "a * a", the
filtered bare-prefix chart for the bad input "a + a ^ a" (whose column 4
stays empty for the filtered set-item chart but not for the bare-prefix
one), and the cross-algorithm comparison table.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cfrec.automata import accepting_trace
from cfrec.cli import build_compare_report, render_compare_report, render_trace
from cfrec.grammar import augment, parse_grammar
from cfrec.tabular import render_chart_dump, tabular_cp, tabular_elr

GOOD = ["a", "*", "a"]
BAD = ["a", "+", "a", "^", "a"]


def main() -> int:
    repo = Path(__file__).resolve().parents[1]
    g = augment(parse_grammar((repo / "grammars" / "g1.cfg").read_text()))

    for algo in ("lc", "plr", "elr", "pseudo_elr", "cp"):
        print(f"--- {algo} on {' '.join(GOOD)}")
        trace = accepting_trace(algo, g, GOOD)
        print(render_trace(trace, GOOD))

    print(f"--- filtered bare-prefix chart on {' '.join(BAD)}")
    print(render_chart_dump(tabular_cp(g, BAD), "cp"))
    print(f"--- merged set-item chart on {' '.join(BAD)}")
    print(render_chart_dump(tabular_elr(g, BAD, variant="merged"), "elr"))

    for tokens in (GOOD, BAD):
        print(f"--- comparison on {' '.join(tokens)}")
        print(render_compare_report(build_compare_report(g, tokens, with_oracle=True)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
