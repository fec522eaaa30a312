"""First-order logic programs under the stable model semantics.

Parsing, finite and lazily evaluated structures, the first-order GL reduct,
two stable-model checkers, program transformations and the pairing-code
simulation for infinite structures.
"""
from .syntax import (
    ArityError, Eq, Fn, Literal, ParseError, Pred, Program, Rule, Var, classify, load_program,
    parse_atom, parse_literal, parse_program, parse_rule, render_program,
)
from .structures import (
    EnumerationTooLarge, EvaluationError, GroundAtom, LazyStructure, Structure, StructureError,
    all_structures, enumerate_expansions, evaluate, ins, load_structure, save_structure,
)
from .grounding import GroundRule, RangeRestrictionError, gl_reduct, render_ground
from .semantics import (
    StableReport, enumerate_stable_expansions, gamma_omega, gamma_step, is_minimal_model, is_model,
    is_stable_progression, is_stable_reduct,
)

__version__ = "0.1.0"
