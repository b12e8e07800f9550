"""Scoped dependency forms: U-forms, S-forms, B-forms and their interpretation."""
from .core import (
    DET, SDET, ParseError, SForm, SLabel, UForm, detect_kind, parse_sform, parse_tree,
    parse_uform, print_sform, print_uform,
)
from .uform import (
    PredArgRelation, PredicationTree, Violation, extract_predarg, predication_edges,
    predication_tree, validate_uform,
)
from .scoping import (
    OrderedUForm, count_scopings, enumerate_scopings, forget_scope, name_arguments, order_uform,
)
from .bform import (
    BForm, Branch, IBFError, Leaf, check_ibf, decode, encode, free_vars, parse_bform,
    print_bform, validate_sform,
)
from .terms import (
    E, T, Abs, And, App, Arrow, Const, Var, alpha_eq, beta_normalize, parse_type, pretty,
    substitute, type_of,
)
from .interp import (
    CompRule, InterpretationError, Lexicon, bind_and_compose, builtin_rules, interpret,
    interpret_all, interpret_uform, match_rules, parse_lexicon, parse_rules, sample_lexicon,
    type_leaf,
)

__version__ = "0.1.0"
