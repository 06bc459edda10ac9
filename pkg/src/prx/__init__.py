"""Parameterized regular expressions: parsing, semantics, and decision procedures."""

from .automata import (
    Dfa,
    Nfa,
    accepts,
    complement,
    determinize,
    export_dot,
    is_empty,
    is_universal,
    nfa_to_json,
    product,
    product_all,
    regex_to_nfa,
    remove_epsilon,
    union_all,
)
from .constructions import (
    FoolingSet,
    family_box_doubleexp,
    family_box_subword,
    family_diamond_power,
    fooling_pairs_box,
    fooling_pairs_diamond,
    lemma3_combine,
    verify_fooling_set,
)
from .errors import (
    CountCapExceeded,
    DomainNotFinite,
    NotSimple,
    ParseError,
    PreconditionViolated,
    PrxError,
    StateCapExceeded,
)
from .fast_paths import (
    WordSet,
    check_simple_memb_box,
    membership_box_fixed_word,
    membership_diamond_fixed_word,
    membership_diamond_simple_sh0,
    nonemptiness_box_sh0,
)
from .semantics import (
    BOX,
    DIAMOND,
    DecisionReport,
    Semantics,
    construct_nfa,
    construct_nfa_domains,
    containment,
    decide_domains,
    membership,
    nonempty_int_reg,
    nonemptiness,
    universality,
)
from .syntax import (
    Alphabet,
    Concat,
    EmptySet,
    Epsilon,
    Lit,
    ParamRegex,
    Star,
    Union,
    Var,
    is_simple,
    parse,
    print_regex,
    size,
    star_height,
    variables,
)
from .valuations import (
    DomainSpec,
    Valuation,
    apply_to_nfa,
    apply_to_regex,
    enumerate_valuations,
)

__all__ = [
    "Alphabet",
    "BOX",
    "Concat",
    "CountCapExceeded",
    "DIAMOND",
    "DecisionReport",
    "Dfa",
    "DomainNotFinite",
    "DomainSpec",
    "EmptySet",
    "Epsilon",
    "FoolingSet",
    "Lit",
    "Nfa",
    "NotSimple",
    "ParamRegex",
    "ParseError",
    "PreconditionViolated",
    "PrxError",
    "Semantics",
    "Star",
    "StateCapExceeded",
    "Union",
    "Valuation",
    "Var",
    "WordSet",
    "accepts",
    "apply_to_nfa",
    "apply_to_regex",
    "check_simple_memb_box",
    "complement",
    "construct_nfa",
    "construct_nfa_domains",
    "containment",
    "decide_domains",
    "determinize",
    "enumerate_valuations",
    "export_dot",
    "family_box_doubleexp",
    "family_box_subword",
    "family_diamond_power",
    "fooling_pairs_box",
    "fooling_pairs_diamond",
    "is_empty",
    "is_simple",
    "is_universal",
    "lemma3_combine",
    "membership",
    "membership_box_fixed_word",
    "membership_diamond_fixed_word",
    "membership_diamond_simple_sh0",
    "nfa_to_json",
    "nonempty_int_reg",
    "nonemptiness",
    "nonemptiness_box_sh0",
    "parse",
    "print_regex",
    "product",
    "product_all",
    "regex_to_nfa",
    "remove_epsilon",
    "size",
    "star_height",
    "union_all",
    "universality",
    "variables",
    "verify_fooling_set",
]

__version__ = "0.1.0"
