"""Higher-order unification over coloured simply-typed lambda terms."""

from .colours import (
    AlphabetError,
    CAnd,
    CConst,
    CNot,
    ColourAlphabet,
    ColourStore,
    COr,
    CVar,
    assert_entailment,
    entails,
    solve_store,
    unify_colours,
)
from .csubst import CSubstitution, apply, check_legal, compose
from .dsl import ParseError, ProblemFile, parse, print_problem
from .terms import (
    Arrow,
    Base,
    BoundVar,
    Const,
    FreeVar,
    Lam,
    App,
    Signature,
    alpha_beta_eta_equal,
    erase,
    monochrome_constraints,
    normalize,
    typecheck,
)
from .unifier import Problem, SearchConfig, SearchEnd, Solution, TermEq, solve, solve_all
from .validate import validate

__version__ = "0.1.0"

__all__ = [
    "alpha_beta_eta_equal",
    "AlphabetError",
    "App",
    "apply",
    "Arrow",
    "assert_entailment",
    "Base",
    "BoundVar",
    "CAnd",
    "CConst",
    "check_legal",
    "CNot",
    "ColourAlphabet",
    "ColourStore",
    "compose",
    "Const",
    "COr",
    "CSubstitution",
    "CVar",
    "entails",
    "erase",
    "FreeVar",
    "Lam",
    "monochrome_constraints",
    "normalize",
    "parse",
    "ParseError",
    "print_problem",
    "Problem",
    "ProblemFile",
    "SearchConfig",
    "SearchEnd",
    "Signature",
    "Solution",
    "solve",
    "solve_all",
    "solve_store",
    "TermEq",
    "typecheck",
    "unify_colours",
    "validate",
]
