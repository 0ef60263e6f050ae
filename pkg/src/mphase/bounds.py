"""Linear iteration bounds from a multiphase ranking function.

For an irredundant valid tuple, each phase k >= 2 admits nonnegative
multipliers mu_1..mu_{k-1}, with mu_{k-1} positive, such that
mu_1 f_1 + ... + mu_{k-1} f_{k-1} + (delta f_k - 1) is nonnegative over
the transition polyhedron.  Feeding those into the recurrence

    c_1 = d_1 = 1
    c_k = (1 + mu) + (sum_j mu_j c_j) / (k - 1) + mu_{k-1} d_{k-1}
    d_k = mu_{k-1} d_{k-1} / k        with  mu = sum_j mu_j

bounds the k-th component after t iterations by c_k M t^{k-1} - d_k t^k,
where M = max(f_1(x0), ..., f_d(x0), 1).  Every phase is over once t
exceeds (c_k / d_k) M, so max_k max(1, c_k / d_k) * M bounds the total
number of iterations: linear in the start state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import RatVec, delta, embed_pre, eval_affine
from .lexicographic import InvalidTupleError
from .loops import RankTuple, check_mlrf
from .polyhedra import MuWitness, Polyhedron, multiplier_combination
from .synthesis import reduce_irredundant

ONE = Fraction(1)

M_DEFINITION = "max(f_1(x0), ..., f_d(x0), 1)"


class NotIrredundantError(ValueError):
    """A phase multiplier was forced to zero: some component is redundant."""


@dataclass(frozen=True)
class BoundReport:
    """Phase multipliers, recurrence constants, and the linear bound."""

    mus: tuple[MuWitness, ...]          # for k = 2..d, in order
    c: tuple[Fraction, ...]             # c_1..c_d
    d: tuple[Fraction, ...]             # d_1..d_d
    coefficient: Fraction               # max_k max(1, c_k/d_k)
    m_definition: str = M_DEFINITION
    m_value: Optional[Fraction] = None
    numeric_bound: Optional[Fraction] = None
    iterations: Optional[int] = None

    @property
    def depth(self) -> int:
        return len(self.c)


def phase_multipliers(q: Polyhedron, tup: RankTuple, k: int) -> MuWitness:
    """Multipliers mu_1..mu_{k-1} >= 0, mu_{k-1} > 0, certifying
    sum_j mu_j f_j + (delta f_k - 1) >= 0 over q.

    mu_{k-1} is maximized under a cap of 1; an optimum of zero means
    the (k-1)-th component never forces the k-th to wait, i.e. the
    tuple is not irredundant.
    """
    if not 2 <= k <= tup.depth:
        raise ValueError(f"phase index {k} out of range 2..{tup.depth}")
    fs = [embed_pre(f) for f in tup.components[: k - 1]]
    fk = delta(tup.components[k - 1]).shift(-1)
    witness = multiplier_combination(q, fs, fk, maximize_last=True, cap=ONE)
    if witness is None:
        raise InvalidTupleError(
            "no phase multipliers exist; tuple is not a valid ranking")
    if witness.mus[k - 2] <= 0:
        raise NotIrredundantError(
            f"component {k - 1} is redundant for phase {k}")
    return witness


def iteration_bound(q: Polyhedron, tup: RankTuple,
                    x0: Optional[RatVec] = None) -> BoundReport:
    """Compute the linear iteration bound for a valid tuple over q.

    The tuple is reduced to an irredundant one first.  With a start
    state x0 the report also carries M, the exact rational bound
    coefficient * M, and its ceiling as an integer iteration count.
    """
    if not check_mlrf(q, tup).valid:
        raise InvalidTupleError("iteration bound needs a valid tuple")
    tup = reduce_irredundant(q, tup)
    depth = tup.depth

    mus: list[MuWitness] = []
    c = [ONE]
    d = [ONE]
    for k in range(2, depth + 1):
        witness = phase_multipliers(q, tup, k)
        mus.append(witness)
        mu_sum = sum(witness.mus, Fraction(0))
        c_k = (1 + mu_sum) \
            + sum(m * cj for m, cj in zip(witness.mus, c)) / (k - 1) \
            + witness.mus[k - 2] * d[k - 2]
        d_k = witness.mus[k - 2] * d[k - 2] / k
        if c_k <= 0 or d_k <= 0:
            raise NotIrredundantError("recurrence produced a nonpositive constant")
        c.append(c_k)
        d.append(d_k)

    coefficient = ONE
    for ck, dk in zip(c, d):
        coefficient = max(coefficient, ck / dk)

    m_value = numeric = iterations = None
    if x0 is not None:
        m_value = max([eval_affine(f, x0) for f in tup.components] + [ONE])
        numeric = coefficient * m_value
        iterations = math.ceil(numeric)
    return BoundReport(tuple(mus), tuple(c), tuple(d), coefficient,
                       m_value=m_value, numeric_bound=numeric,
                       iterations=iterations)
