"""Termination analysis for single-path linear-constraint loops.

Synthesizes multiphase linear ranking functions with exact rational
certificates, handles rational and integer semantics (the latter via
the integer hull of the transition polyhedron), converts lexicographic
ranking tuples to multiphase ones, and computes explicit linear
iteration bounds.
"""

from .core import AffineFunc, Rational, RatVec, delta, embed_pre, eval_affine, rat, rat_str, vec
from .loops import (
    INTEGER_DOMAIN,
    KIND_BMS,
    KIND_MLRF,
    KIND_NESTED,
    KIND_WEAK_BMS,
    LoopParseError,
    MlrfCheck,
    NestedCheck,
    RATIONAL_DOMAIN,
    RankTuple,
    SLCLoop,
    TransitionPoint,
    check_mlrf,
    check_nested,
    format_affine,
    parse_affine,
    parse_loop,
    parse_tuple_file,
    transition_polyhedron,
)
from .lexicographic import BmsCheck, InvalidTupleError, check_bmsllrf, llrf_to_mlrf
from .synthesis import (
    SynthesisResult,
    mlrf_to_nested,
    reduce_irredundant,
    synth_lrf,
    synth_mlrf,
    synth_nested,
)
from .bounds import BoundReport, NotIrredundantError, iteration_bound, phase_multipliers
from .simulator import (
    NondeterministicUpdateError,
    Trace,
    TraceCheck,
    check_tuple_on_trace,
    ranked_index,
    run_loop,
    update_map,
    write_trace_csv,
)
from . import polyhedra

__all__ = [
    "AffineFunc",
    "BmsCheck",
    "BoundReport",
    "INTEGER_DOMAIN",
    "InvalidTupleError",
    "KIND_BMS",
    "KIND_MLRF",
    "KIND_NESTED",
    "KIND_WEAK_BMS",
    "LoopParseError",
    "MlrfCheck",
    "NestedCheck",
    "NondeterministicUpdateError",
    "NotIrredundantError",
    "RATIONAL_DOMAIN",
    "RankTuple",
    "Rational",
    "RatVec",
    "SLCLoop",
    "SynthesisResult",
    "Trace",
    "TraceCheck",
    "TransitionPoint",
    "check_bmsllrf",
    "check_mlrf",
    "check_nested",
    "check_tuple_on_trace",
    "delta",
    "embed_pre",
    "eval_affine",
    "format_affine",
    "iteration_bound",
    "llrf_to_mlrf",
    "mlrf_to_nested",
    "parse_affine",
    "parse_loop",
    "parse_tuple_file",
    "phase_multipliers",
    "polyhedra",
    "ranked_index",
    "rat",
    "rat_str",
    "reduce_irredundant",
    "run_loop",
    "synth_lrf",
    "synth_mlrf",
    "synth_nested",
    "transition_polyhedron",
    "update_map",
    "vec",
    "write_trace_csv",
]
