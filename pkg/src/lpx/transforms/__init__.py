"""Program and theory transformations; each returns a TransformReport with a fresh-symbol manifest."""
from .combine import FIN, INF, combine_fin_inf, guard
from .common import Symbol, TransformError, TransformReport
from .clause_coding import dlp_to_nlp_infinite, expected_counts
from .universal import UniversalTheory, nlp_to_universal_theory, universal_theory_to_constraints
from .saturation import Skeleton, parity_program, so2dlp
from .shift import dependency_graph, head_cycle_free, shift

__all__ = [
    "FIN", "INF", "Skeleton", "Symbol", "TransformError", "TransformReport", "UniversalTheory",
    "combine_fin_inf", "dependency_graph", "dlp_to_nlp_infinite", "expected_counts", "guard",
    "head_cycle_free", "nlp_to_universal_theory", "parity_program", "shift", "so2dlp",
    "universal_theory_to_constraints",
]
