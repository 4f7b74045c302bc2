"""Workbench for nondeterministic stack-based context-free recognizers.

Five stack recognizers over a shared push-down engine (dotted items,
prefix items, set items with full or simplified top-down filtering, and
bare prefixes), two chart realizations with variants, a brute-force
derivation oracle for cross-validation, and a CLI for traces, chart
dumps, and cross-algorithm metrics.
"""

from .automata import (
    ALGORITHMS,
    BudgetExhaustedError,
    Configuration,
    KindMismatchError,
    RecognitionResult,
    Trace,
    accepting_trace,
    recognize,
    successors,
)
from .grammar import (
    AugmentedGrammar,
    Diagnostic,
    DuplicateStartError,
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    InvalidGrammarError,
    Relation,
    Rule,
    Symbol,
    UnknownTokenError,
    ValidationReport,
    augment,
    common_prefix_pairs,
    left_corner,
    left_corner_star,
    nonterm,
    parse_grammar,
    term,
    validate,
)
from .items import (
    CPItem,
    ELRItem,
    LCItem,
    PLRItem,
    cp_items,
    elr_item_is_valid,
    lc_items,
    plr_items,
    render_item,
)
from .oracle import LimitExceededError, derives, sentences_up_to, viable_prefix
from .tabular import (
    Chart,
    ChartResult,
    ColumnIncompleteError,
    PredictSet,
    duplicate_alpha_cells,
    predict_set,
    render_chart_dump,
    tabular_cp,
    tabular_cp_unfiltered_by_rows,
    tabular_elr,
)

__all__ = [name for name in dir() if not name.startswith("_")]
