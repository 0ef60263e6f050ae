"""Exact polyhedral engine: rational LP, certificates, generators, hull."""

from .types import (
    CertificateError,
    Constraint,
    FarkasCert,
    GeneratorRep,
    MuWitness,
    Polyhedron,
    StrictRowError,
    eq_constraint,
    lt_one_constraint,
    neg_constraint,
    nonneg_constraint,
    nonpos_constraint,
)
from .lp import (
    Feasibility,
    Implication,
    InfeasiblePolyhedronError,
    OptResult,
    conic_combine_nonneg,
    implies_nonneg,
    is_feasible,
    motzkin_combine_strict,
    multiplier_combination,
    optimize,
    remove_redundant_rows,
)
from .doubledesc import from_generators, generators
from .inthull import DEFAULT_CUT_LIMIT, HullIterationError, integer_hull

__all__ = [
    "CertificateError",
    "Constraint",
    "DEFAULT_CUT_LIMIT",
    "FarkasCert",
    "Feasibility",
    "GeneratorRep",
    "HullIterationError",
    "Implication",
    "InfeasiblePolyhedronError",
    "MuWitness",
    "OptResult",
    "Polyhedron",
    "StrictRowError",
    "conic_combine_nonneg",
    "eq_constraint",
    "from_generators",
    "generators",
    "implies_nonneg",
    "integer_hull",
    "is_feasible",
    "lt_one_constraint",
    "motzkin_combine_strict",
    "multiplier_combination",
    "neg_constraint",
    "nonneg_constraint",
    "nonpos_constraint",
    "optimize",
    "remove_redundant_rows",
]
