"""Concrete execution of deterministic loops.

Ground truth for termination step counts: the guard is evaluated
exactly at each state and the (deterministic) update map applied until
the guard fails or the step budget runs out.  Traces also support
pointwise ranking checks, reporting per-step component values and the
minimal ranking index at every transition.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Optional, Sequence

from .core import AffineFunc, DimensionMismatchError, RatVec, eval_affine, rat_str
from .loops import RankTuple, SLCLoop

TERMINATED = "terminated"
MAX_STEPS = "max-steps"

DEFAULT_MAX_STEPS = 1_000_000


class NondeterministicUpdateError(ValueError):
    """The loop's update does not define every primed variable by
    exactly one equality over the unprimed state."""


@dataclass(frozen=True)
class Trace:
    states: tuple[RatVec, ...]
    steps: int
    outcome: str  # TERMINATED | MAX_STEPS


@dataclass(frozen=True)
class TraceCheck:
    all_ranked: bool
    unranked_at: Optional[int] = None
    ranking_indices: tuple[int, ...] = ()   # minimal index per transition
    values: tuple[tuple[Fraction, ...], ...] = ()  # per state, per component


def update_map(loop: SLCLoop) -> list[AffineFunc]:
    """Extract x_i' = e_i(x) from the update rows.

    Update rows come in opposite-inequality pairs (or single equality
    rows); each pair must touch exactly one primed variable, and every
    primed variable must be defined exactly once.  Anything else is
    nondeterministic and rejected.
    """
    n = loop.n
    equalities: list[tuple[RatVec, Fraction]] = []
    pending: list[tuple[RatVec, Fraction]] = []
    for c in loop.update:
        if c.rel == "=":
            equalities.append((c.coeffs, c.rhs))
            continue
        negated = (tuple(-x for x in c.coeffs), -c.rhs)
        if negated in pending:
            pending.remove(negated)
            equalities.append((c.coeffs, c.rhs))
        else:
            pending.append((c.coeffs, c.rhs))
    if pending:
        raise NondeterministicUpdateError(
            "update rows include a plain inequality")

    defined: dict[int, AffineFunc] = {}
    for coeffs, rhs in equalities:
        primed = [j for j in range(n) if coeffs[n + j] != 0]
        if len(primed) != 1:
            raise NondeterministicUpdateError(
                "an update equality couples several primed variables")
        j = primed[0]
        if j in defined:
            raise NondeterministicUpdateError(
                f"{loop.var_names[j]}' is defined more than once")
        gamma = coeffs[n + j]
        defined[j] = AffineFunc(
            tuple(-coeffs[i] / gamma for i in range(n)), rhs / gamma)
    missing = [loop.var_names[j] for j in range(n) if j not in defined]
    if missing:
        raise NondeterministicUpdateError(
            f"no update equality for: {', '.join(missing)}")
    return [defined[j] for j in range(n)]


def run_loop(loop: SLCLoop, x0: Sequence, max_steps: int = DEFAULT_MAX_STEPS) -> Trace:
    """Iterate the loop from x0 while the guard holds, exactly."""
    x = tuple(Fraction(v) for v in x0)
    if len(x) != loop.n:
        raise DimensionMismatchError(
            f"start state has {len(x)} values for {loop.n} variables")
    updates = update_map(loop)
    states = [x]
    steps = 0
    while steps < max_steps:
        if not all(c.satisfied_by(x) for c in loop.guard):
            return Trace(tuple(states), steps, TERMINATED)
        x = tuple(eval_affine(e, x) for e in updates)
        states.append(x)
        steps += 1
    if not all(c.satisfied_by(x) for c in loop.guard):
        return Trace(tuple(states), steps, TERMINATED)
    return Trace(tuple(states), steps, MAX_STEPS)


def ranked_index(tup: RankTuple, pre: RatVec, post: RatVec) -> Optional[int]:
    """Minimal 1-based index ranking the transition, or None.

    Index i ranks (x, x') when every component up to i decreases by at
    least 1, component i is nonnegative at x, and all earlier
    components are nonpositive at x.
    """
    comps = tup.components
    for i, f in enumerate(comps):
        if eval_affine(f, pre) - eval_affine(f, post) < 1:
            return None  # larger indices need this decrease as well
        if eval_affine(f, pre) >= 0:
            return i + 1  # earlier components were all negative here
    return None


def check_tuple_on_trace(tup: RankTuple, trace: Trace) -> TraceCheck:
    """Pointwise ranking along a trace, with per-step component values."""
    values = tuple(
        tuple(eval_affine(f, state) for f in tup.components)
        for state in trace.states)
    indices: list[int] = []
    for t in range(trace.steps):
        idx = ranked_index(tup, trace.states[t], trace.states[t + 1])
        if idx is None:
            return TraceCheck(False, unranked_at=t,
                              ranking_indices=tuple(indices), values=values)
        indices.append(idx)
    return TraceCheck(True, ranking_indices=tuple(indices), values=values)


def write_trace_csv(out: IO[str], trace: Trace, loop: SLCLoop,
                    tup: Optional[RankTuple] = None) -> None:
    """One row per state: variable values, then each component value."""
    writer = csv.writer(out)
    header = ["step"] + list(loop.var_names)
    if tup is not None:
        header += [f"f{i + 1}" for i in range(tup.depth)]
    writer.writerow(header)
    for t, state in enumerate(trace.states):
        row = [str(t)] + [rat_str(v) for v in state]
        if tup is not None:
            row += [rat_str(eval_affine(f, state)) for f in tup.components]
        writer.writerow(row)
