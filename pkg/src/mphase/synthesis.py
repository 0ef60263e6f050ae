"""Synthesis of multiphase ranking functions.

The nested conditions are linear in the unknown coefficients once each
universal entailment is replaced by its nonnegative-multiplier
encoding, so a single exact LP decides existence at a given depth.
Depth search ascends from 1; integer-domain loops are handled by
replacing the transition polyhedron with its integer hull first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import AffineFunc, delta, embed_pre
from .lexicographic import InvalidTupleError
from .loops import (
    KIND_MLRF,
    KIND_NESTED,
    INTEGER_DOMAIN,
    RATIONAL_DOMAIN,
    RankTuple,
    SLCLoop,
    check_mlrf,
    check_nested,
    transition_polyhedron,
)
from .polyhedra import (
    CertificateError,
    FarkasCert,
    Polyhedron,
    StrictRowError,
    implies_nonneg,
    integer_hull,
    is_feasible,
    motzkin_combine_strict,
    nonpos_constraint,
)
from .polyhedra.simplex import EQ, solve_lp

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class SynthesisResult:
    status: str  # "found" | "not-found"
    tuple: Optional[RankTuple] = None
    depth: Optional[int] = None
    certs: tuple[FarkasCert, ...] = ()
    domain_used: str = RATIONAL_DOMAIN
    hull_applied: bool = False
    vacuous: bool = False
    max_depth_tried: Optional[int] = None
    polyhedron: Optional[Polyhedron] = None  # the Q actually analyzed

    @property
    def found(self) -> bool:
        return self.status == "found"


def synth_nested(q: Polyhedron, d: int) -> Optional[RankTuple]:
    """Find a nested ranking tuple of depth exactly d over q, or None.

    One feasibility LP: unknowns are the d coefficient rows and
    constants plus one nonnegative multiplier vector per condition;
    each condition contributes coefficient-matching equations against
    the rows of q.  None means no nested tuple of depth d exists, and
    hence no multiphase one of depth <= d over the rationals.
    """
    if d < 1:
        raise ValueError("depth must be at least 1")
    if q.dim % 2 != 0:
        raise ValueError("transition polyhedron dimension must be even")
    n = q.dim // 2
    rows = q.le_rows()
    m = len(rows)

    # Variable layout: d blocks of (n coeffs + const), free; then per
    # condition (d step conditions, then last-nonneg) m multipliers and
    # one slack, all nonnegative.
    nf = d * (n + 1)
    block = m + 1
    total = nf + (d + 1) * block

    def coeff_var(i: int, j: int) -> int:  # component i (1-based), coordinate j
        return (i - 1) * (n + 1) + j

    def const_var(i: int) -> int:
        return (i - 1) * (n + 1) + n

    def lam_var(cond: int, r: int) -> int:
        return nf + cond * block + r

    def slack_var(cond: int) -> int:
        return nf + cond * block + m

    lp_rows = []

    def add_condition(cond: int, pre: list[tuple[int, Fraction]],
                      post: list[tuple[int, Fraction]],
                      const_terms: list[tuple[int, Fraction]],
                      const_offset: Fraction) -> None:
        """Equate (sum of unknown-scaled coordinates) with the Farkas
        recombination of q's rows for one entailment condition."""
        for c in range(2 * n):
            coeffs = [ZERO] * total
            src = pre if c < n else post
            for var, w in src:
                coeffs[coeff_var(var, c % n)] += w
            for r, row in enumerate(rows):
                coeffs[lam_var(cond, r)] = row.coeffs[c]
            lp_rows.append((tuple(coeffs), EQ, ZERO))
        coeffs = [ZERO] * total
        for var, w in const_terms:
            coeffs[const_var(var)] += w
        for r, row in enumerate(rows):
            coeffs[lam_var(cond, r)] = -row.rhs
        coeffs[slack_var(cond)] = -ONE
        lp_rows.append((tuple(coeffs), EQ, -const_offset))

    # Step conditions: (delta f_i - 1) + f_{i-1} >= 0, f_0 = 0.
    for i in range(1, d + 1):
        pre = [(i, ONE)]
        post = [(i, -ONE)]
        const_terms = [(i - 1, ONE)] if i >= 2 else []
        if i >= 2:
            pre.append((i - 1, ONE))
        add_condition(i - 1, pre, post, const_terms, Fraction(-1))
    # Last component nonnegative on enabled states.
    add_condition(d, [(d, ONE)], [], [(d, ONE)], ZERO)

    nonneg = [False] * nf + [True] * ((d + 1) * block)
    result = solve_lp(total, lp_rows, None, nonneg=nonneg)
    if result.status == "infeasible":
        return None
    assert result.status == "optimal"
    comps = []
    for i in range(1, d + 1):
        coeffs = tuple(result.point[coeff_var(i, j)] for j in range(n))
        comps.append(AffineFunc(coeffs, result.point[const_var(i)]))
    tup = RankTuple(tuple(comps), KIND_NESTED)
    verdict = check_nested(q, tup)
    if not verdict.valid:
        raise CertificateError("synthesized tuple failed verification")
    return tup


def synth_mlrf(loop: SLCLoop, dmax: int = 5,
               domain: Optional[str] = None) -> SynthesisResult:
    """Search for a multiphase ranking function of depth up to dmax.

    Integer-domain loops are decided over the integer hull of the
    transition polyhedron, which is complete for integer transitions;
    the rational search is complete as is.  The first depth that
    succeeds wins.
    """
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    domain = domain or loop.domain
    if domain not in (RATIONAL_DOMAIN, INTEGER_DOMAIN):
        raise ValueError(f"bad domain {domain!r}")
    q = transition_polyhedron(loop)
    if q.has_strict_rows():
        raise StrictRowError("synthesis requires a nonstrict guard")
    hull_applied = False
    if domain == INTEGER_DOMAIN:
        q = integer_hull(q)
        hull_applied = True
    if not is_feasible(q).feasible:
        return SynthesisResult("found", RankTuple((), KIND_NESTED), depth=0,
                               domain_used=domain, hull_applied=hull_applied,
                               vacuous=True, max_depth_tried=0, polyhedron=q)
    for d in range(1, dmax + 1):
        tup = synth_nested(q, d)
        if tup is not None:
            verdict = check_nested(q, tup)
            return SynthesisResult("found", tup, depth=d, certs=verdict.certs,
                                   domain_used=domain, hull_applied=hull_applied,
                                   max_depth_tried=d, polyhedron=q)
    return SynthesisResult("not-found", domain_used=domain,
                           hull_applied=hull_applied, max_depth_tried=dmax,
                           polyhedron=q)


def synth_lrf(loop: SLCLoop, domain: Optional[str] = None) -> SynthesisResult:
    """Depth-1 search: a single affine function that is nonnegative on
    enabled states and decreases by at least 1 on every transition."""
    return synth_mlrf(loop, dmax=1, domain=domain)


def reduce_irredundant(q: Polyhedron, tup: RankTuple) -> RankTuple:
    """Greedily drop components whose removal keeps the tuple valid,
    lowest index first, restarting after each removal."""
    if not check_mlrf(q, tup).valid:
        raise InvalidTupleError("cannot reduce an invalid tuple")
    comps = list(tup.components)
    i = 0
    while i < len(comps):
        candidate = RankTuple(tuple(comps[:i] + comps[i + 1:]), tup.kind)
        if check_mlrf(q, candidate).valid:
            comps.pop(i)
            i = 0
        else:
            i += 1
    return RankTuple(tuple(comps), tup.kind)


def _strengthen(q: Polyhedron, base: AffineFunc, target: AffineFunc) -> tuple[AffineFunc, Fraction]:
    """Smallest-effort repair target + mu * base >= 0 over q; the
    premise target >= 0 or base > 0 must hold over q."""
    witness = motzkin_combine_strict(q, [embed_pre(base)], target)
    if witness is None:
        raise CertificateError("alternation witness missing")
    return target + embed_pre(base).scale(witness.mus[0]), witness.mus[0]


def _to_nested(q: Polyhedron, comps: list[AffineFunc]) -> list[AffineFunc]:
    if not is_feasible(q).feasible:
        return []
    if check_nested(q, RankTuple(tuple(comps), KIND_NESTED)).valid:
        return comps
    comps = list(reduce_irredundant(q, RankTuple(tuple(comps), KIND_MLRF)).components)
    if len(comps) <= 1:
        return comps
    f1 = comps[0]
    q_prime = q.with_rows([nonpos_constraint(embed_pre(f1))])
    tail = _to_nested(q_prime, comps[1:])
    if not tail:
        return [f1]

    hs = list(tail)
    # Last component must be nonnegative over all of q.
    if not implies_nonneg(q, embed_pre(hs[-1])).holds:
        witness = motzkin_combine_strict(q, [embed_pre(f1)], embed_pre(hs[-1]))
        if witness is None:
            raise CertificateError("alternation witness missing")
        hs[-1] = hs[-1] + f1.scale(witness.mus[0])
    # Fix each step condition by adjusting the earlier component.
    for pos in range(len(hs) - 1, 0, -1):
        cond = delta(hs[pos]).shift(-1) + embed_pre(hs[pos - 1])
        if implies_nonneg(q, cond).holds:
            continue
        witness = motzkin_combine_strict(q, [embed_pre(f1)], cond)
        if witness is None:
            raise CertificateError("alternation witness missing")
        hs[pos - 1] = hs[pos - 1] + f1.scale(witness.mus[0])
    # First condition couples the head to the repaired second component.
    cond2 = delta(hs[0]).shift(-1)
    if implies_nonneg(q, cond2).holds:
        return hs  # the head became redundant; shorter nested tuple
    witness = motzkin_combine_strict(q, [embed_pre(f1)], cond2)
    if witness is None:
        raise CertificateError("alternation witness missing")
    mu1 = witness.mus[0]
    if mu1 <= 0:
        raise CertificateError("head multiplier must be positive")
    out = [f1.scale(mu1)] + hs
    if mu1 < 1:
        out = [f.scale(ONE / mu1) for f in out]
    return out


def mlrf_to_nested(q: Polyhedron, tup: RankTuple) -> RankTuple:
    """Rebuild a valid irredundant multiphase tuple into a nested one
    of no greater depth over the same polyhedron."""
    if not check_mlrf(q, tup).valid:
        raise InvalidTupleError("input tuple is not a valid multiphase ranking")
    if not is_feasible(q).feasible:
        return tup.with_kind(KIND_NESTED)
    out = RankTuple(tuple(_to_nested(q, list(tup.components))), KIND_NESTED)
    if out.depth > tup.depth:
        raise CertificateError("conversion increased depth")
    verdict = check_nested(q, out)
    if not verdict.valid:
        raise CertificateError("converted tuple failed the nested check")
    return out
