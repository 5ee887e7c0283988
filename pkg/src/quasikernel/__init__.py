"""Quasi-kernels, quasi-sinks and class witnesses for finite digraphs and the infinite graphs they generate."""

from .constructions import (
    ab_cover,
    coloring_to_out2,
    kn_free_partition,
    quasi_kernel,
    quasi_sink,
    step_up_inout,
    step_up_out,
    tournament_split,
)
from .digraph import INF, Digraph, closure, condensation, is_independent, is_tournament
from .errors import CapExceeded, InputError, ParseError, QuasiKernelError
from .ginfty import TerminatedDigraph, delta, lazy_edge, materialize, odot
from .lazyset import parse_lazyset
from .oracle import ClassClaim, ClassKind, VerifyReport, decide_class, verify_claim
from .witnesses import LazyClaim, classify, verify_truncated

__all__ = [
    "INF",
    "CapExceeded",
    "ClassClaim",
    "ClassKind",
    "Digraph",
    "InputError",
    "LazyClaim",
    "ParseError",
    "QuasiKernelError",
    "TerminatedDigraph",
    "VerifyReport",
    "ab_cover",
    "classify",
    "closure",
    "coloring_to_out2",
    "condensation",
    "decide_class",
    "delta",
    "is_independent",
    "is_tournament",
    "kn_free_partition",
    "lazy_edge",
    "materialize",
    "odot",
    "parse_lazyset",
    "quasi_kernel",
    "quasi_sink",
    "step_up_inout",
    "step_up_out",
    "tournament_split",
    "verify_claim",
    "verify_truncated",
]
