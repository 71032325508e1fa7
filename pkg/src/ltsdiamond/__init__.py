"""Diamond interleaving patterns in labelled transition systems.

Detects regions where parallel action sequences interleave freely, verifies
them against brute-force oracles, and rewrites maximal regions into single
macro-transitions (with a bisimulation-preserving inverse expansion).
"""

from .diamond import (Diamond, EMPTY, LabelSyntaxError, MonotoneSequenceWarning,
                      format_label, is_prefix, is_sequence_of, make_diamond,
                      parse_label)
from .detector import (DEFAULT_MAX_SIZE, ConvergenceTable, DetectionResult,
                       OverlapViolation, PreconditionViolated, StepResult,
                       find_all_diamonds, find_diamonds_to, maximal_strict, step)
from .equivalence import (Partition, bisim_partition, bisimilar, bounded_traces,
                          diamond_equivalent, disjoint_union, minimize, quotient)
from .generator import lts_of_diamond, random_lts, suffix_closure
from .lts import (AutFormatError, Lts, MalformedHeader, StateOutOfRange,
                  UnterminatedQuote, minimal_alphabet, parse_aut, write_aut,
                  write_dot)
from .oracle import (CapExceeded, Convergence, ConvergenceChecker,
                     check_convergence, enumerate_convergences_oracle)
from .reducer import (ReducedLts, ReduceResult, expand, interior_states,
                      reduce, to_reduced)

__all__ = [
    "AutFormatError", "CapExceeded", "Convergence", "ConvergenceChecker",
    "ConvergenceTable", "DEFAULT_MAX_SIZE", "DetectionResult", "Diamond",
    "EMPTY", "LabelSyntaxError", "Lts", "MalformedHeader",
    "MonotoneSequenceWarning", "OverlapViolation", "Partition",
    "PreconditionViolated", "ReduceResult", "ReducedLts", "StateOutOfRange",
    "StepResult", "UnterminatedQuote", "bisim_partition", "bisimilar",
    "bounded_traces", "check_convergence", "diamond_equivalent",
    "disjoint_union", "enumerate_convergences_oracle", "expand",
    "find_all_diamonds", "find_diamonds_to", "format_label",
    "interior_states", "is_prefix", "is_sequence_of", "lts_of_diamond",
    "make_diamond", "maximal_strict", "minimal_alphabet", "minimize",
    "parse_aut", "parse_label", "quotient", "random_lts", "reduce", "step",
    "suffix_closure", "to_reduced", "write_aut", "write_dot",
]

__version__ = "0.1.0"
