"""Stack symbols for the four recognizer families.

Each family refines the previous one's items: dotted items carry a full
rule and dot, prefix items keep only (lhs, recognized prefix), set items
replace the single lhs by a nonterminal set, and bare-prefix items drop
the lhs entirely.  The bare-prefix and set universes are quotients, so
their sizes only ever shrink.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grammar import AugmentedGrammar, Rule, Symbol, render_symbols


@dataclass(frozen=True)
class LCItem:
    """Dotted rule [A -> alpha . beta]; dot counts recognized symbols."""

    rule: Rule
    dot: int

    @property
    def next_symbol(self) -> Symbol | None:
        return self.rule.rhs[self.dot] if self.dot < len(self.rule.rhs) else None

    @property
    def complete(self) -> bool:
        return self.dot == len(self.rule.rhs)

    def __repr__(self):
        return render_item(self)


@dataclass(frozen=True)
class PLRItem:
    """[A -> alpha]: every dotted item of A's rules with recognized prefix alpha."""

    lhs: Symbol
    alpha: tuple[Symbol, ...]

    def __repr__(self):
        return render_item(self)


@dataclass(frozen=True)
class ELRItem:
    """[{A1,..,An} -> alpha]: prefix alpha under any of the listed left-hand sides."""

    delta: frozenset[Symbol]
    alpha: tuple[Symbol, ...]

    def __repr__(self):
        return render_item(self)


@dataclass(frozen=True)
class CPItem:
    """[-> alpha]: a recognized common prefix, left-hand sides forgotten."""

    alpha: tuple[Symbol, ...]

    def __repr__(self):
        return render_item(self)


def render_delta(delta: frozenset[Symbol]) -> str:
    return "{" + ",".join(sorted(s.name for s in delta)) + "}"


def render_item(item) -> str:
    if isinstance(item, LCItem):
        parts = [render_symbols(item.rule.rhs[: item.dot]), ".", render_symbols(item.rule.rhs[item.dot :])]
        body = " ".join(p for p in parts if p)
        return f"[{item.rule.lhs.name} -> {body}]"
    if isinstance(item, PLRItem):
        alpha = render_symbols(item.alpha)
        return f"[{item.lhs.name} -> {alpha}]" if alpha else f"[{item.lhs.name} ->]"
    if isinstance(item, ELRItem):
        alpha = render_symbols(item.alpha)
        head = render_delta(item.delta)
        return f"[{head} -> {alpha}]" if alpha else f"[{head} ->]"
    if isinstance(item, CPItem):
        alpha = render_symbols(item.alpha)
        return f"[-> {alpha}]" if alpha else f"[->]"
    raise TypeError(f"not an item: {item!r}")


def lc_items(g: AugmentedGrammar) -> frozenset[LCItem]:
    """All dotted items; dot 0 is reserved for the fresh start rule."""
    out = set()
    for r in g.rules_dagger:
        lo = 0 if r.lhs == g.start_prime else 1
        for dot in range(lo, len(r.rhs) + 1):
            out.add(LCItem(r, dot))
    return frozenset(out)


def plr_items(g: AugmentedGrammar) -> frozenset[PLRItem]:
    """Quotient of the dotted items by (lhs, recognized prefix)."""
    out = set()
    for r in g.rules_dagger:
        lo = 0 if r.lhs == g.start_prime else 1
        for dot in range(lo, len(r.rhs) + 1):
            out.add(PLRItem(r.lhs, r.rhs[:dot]))
    return frozenset(out)


def cp_items(g: AugmentedGrammar) -> frozenset[CPItem]:
    """All distinct rule prefixes, the empty prefix included."""
    out = set()
    for r in g.rules_dagger:
        for dot in range(len(r.rhs) + 1):
            out.add(CPItem(r.rhs[:dot]))
    return frozenset(out)


def elr_item_is_valid(delta, alpha, g: AugmentedGrammar) -> bool:
    """Membership test for the set-item universe, which is never enumerated.

    The universe is exponential in the nonterminal count, so validity is
    checked lazily for the items that actually materialize.
    """
    delta = frozenset(delta)
    alpha = tuple(alpha)
    if not delta:
        return False
    node = g.idx.nodes.get(alpha)
    if node is None or not delta <= node.through:
        return False
    return bool(alpha) or delta == frozenset({g.start_prime})
