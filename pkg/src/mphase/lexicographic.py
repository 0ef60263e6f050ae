"""Lexicographic ranking tuples: validity checking and conversion to
multiphase form.

The checker decides validity exactly by case-splitting on how each
component can fail to rank a transition; complements of the decrease
and nonnegativity conditions are strict systems handled by the mixed
strict/nonstrict feasibility engine.  The converter follows the
constructive equivalence argument: peel off one component whose conic
strengthening is nonnegative over the whole polyhedron, recurse on the
transitions it does not decrease, then lift the inner tuple back with
alternation-lemma repairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import AffineFunc, RatVec, delta, embed_pre
from .loops import (
    KIND_MLRF,
    KIND_WEAK_BMS,
    RankTuple,
    TransitionPoint,
    check_mlrf,
    _component_dims,
)
from .polyhedra import (
    CertificateError,
    Constraint,
    Polyhedron,
    conic_combine_nonneg,
    eq_constraint,
    implies_nonneg,
    is_feasible,
    motzkin_combine_strict,
    neg_constraint,
    nonneg_constraint,
    nonpos_constraint,
    optimize,
)


class InvalidTupleError(ValueError):
    """An operation required a valid ranking tuple and got an invalid one."""


@dataclass(frozen=True)
class BmsCheck:
    valid: bool
    witness: Optional[TransitionPoint] = None


def check_bmsllrf(q: Polyhedron, tup: RankTuple, weak: bool = False) -> BmsCheck:
    """Decide whether every transition of q is ranked by some component:
    nonnegative decrease on all earlier components, decrease of at
    least 1 (strictly positive when weak) on the ranking one, and
    nonnegativity of the ranking one at the source state.

    The search enumerates the exact ways all components can fail; any
    returned witness is a genuine transition no component ranks.
    """
    _component_dims(q, tup)
    comps = tup.components

    def search(rows: list[Constraint], i: int) -> Optional[RatVec]:
        feas = is_feasible(Polyhedron(q.dim, rows))
        if not feas.feasible:
            return None
        if i == len(comps):
            return feas.witness
        df = delta(comps[i])
        f_pre = embed_pre(comps[i])
        # The component's decrease is negative: nothing at or past i ranks.
        probe = Polyhedron(q.dim, rows + [neg_constraint(df)])
        feas = is_feasible(probe)
        if feas.feasible:
            return feas.witness
        if weak:
            # decrease exactly zero: i dead, later components stay alive
            middle = [eq_constraint(df)]
        else:
            # decrease in [0, 1): i dead, later components stay alive
            middle = [nonneg_constraint(df),
                      Constraint(df.coeffs, "<", Fraction(1) - df.const)]
        hit = search(rows + middle, i + 1)
        if hit is not None:
            return hit
        # decrease fine but the component is negative at the source
        lower = Fraction(0) if weak else Fraction(1)
        decrease_ok = (neg_constraint(-df) if weak
                       else nonneg_constraint(df.shift(-1)))
        return search(rows + [decrease_ok, neg_constraint(f_pre)], i + 1)

    witness = search(list(q.constraints), 0)
    if witness is None:
        return BmsCheck(True)
    return BmsCheck(False, TransitionPoint(witness))


def _min_decrease_scale(q: Polyhedron, f: AffineFunc) -> AffineFunc:
    """Rescale f so its decrease is at least 1 over q; the minimum
    decrease must be positive, else the caller's certificate was bad."""
    opt = optimize(q, delta(f), "min")
    if opt.status != "optimal" or opt.value <= 0:
        raise CertificateError("decrease has no positive minimum")
    if opt.value < 1:
        return f.scale(Fraction(1) / opt.value)
    return f


def _peel_component(q: Polyhedron, comps: list[AffineFunc]) -> tuple[AffineFunc, int]:
    """Find g nonnegative over q that decreases on every transition the
    chosen component ranks; returns (g, index of that component)."""
    for idx, f in enumerate(comps):
        if implies_nonneg(q, embed_pre(f)).holds:
            return f, idx
    d = len(comps)
    j = d
    while j >= 2:
        prefix = [neg_constraint(embed_pre(comps[t])) for t in range(j - 1)]
        if is_feasible(q.with_rows(prefix)).feasible:
            break  # the shorter disjunction fails; j is minimal
        j -= 1
    witness = conic_combine_nonneg(q, [embed_pre(comps[t]) for t in range(j)])
    if witness is None:
        raise CertificateError("conic combination missing for a valid tuple")
    g = comps[j - 1]
    for mu, f in zip(witness.mus, comps):
        g = g + f.scale(mu)
    return g, j - 1


def _convert(q: Polyhedron, comps: list[AffineFunc]) -> list[AffineFunc]:
    if not is_feasible(q).feasible:
        return []
    if not comps:
        raise CertificateError("no components left for a nonempty polyhedron")
    if len(comps) == 1:
        return [_min_decrease_scale(q, comps[0])]

    g, removed = _peel_component(q, comps)
    rest = comps[:removed] + comps[removed + 1:]
    q_prime = q.with_rows([nonpos_constraint(delta(g))])
    inner = _convert(q_prime, rest)

    lifted: list[AffineFunc] = []
    rows = list(q.constraints)
    for gj in inner:
        residual = Polyhedron(q.dim, rows)
        if not is_feasible(residual).feasible:
            # every transition is already ranked by the lifted prefix
            return [h.shift(1) for h in lifted]
        cond = delta(gj).shift(-1)
        if implies_nonneg(residual, cond).holds:
            repaired = gj
        else:
            witness = motzkin_combine_strict(residual, [delta(g)], cond)
            if witness is None:
                raise CertificateError("repair multiplier missing")
            repaired = gj + g.scale(witness.mus[0])
        lifted.append(repaired)
        rows.append(nonpos_constraint(embed_pre(repaired).shift(1)))

    final = Polyhedron(q.dim, rows)
    if is_feasible(final).feasible:
        g = _min_decrease_scale(final, g)
    return [h.shift(1) for h in lifted] + [g]


def llrf_to_mlrf(q: Polyhedron, tup: RankTuple, weak: Optional[bool] = None) -> RankTuple:
    """Convert a valid lexicographic tuple to a multiphase one of depth
    at most the input's over the same polyhedron."""
    if weak is None:
        weak = tup.kind == KIND_WEAK_BMS
    verdict = check_bmsllrf(q, tup, weak)
    if not verdict.valid:
        raise InvalidTupleError("input tuple is not a valid lexicographic ranking")
    if tup.depth == 0 or not is_feasible(q).feasible:
        return RankTuple(tup.components, KIND_MLRF)
    out = RankTuple(tuple(_convert(q, list(tup.components))), KIND_MLRF)
    if out.depth > tup.depth:
        raise CertificateError("conversion increased depth")
    final = check_mlrf(q, out)
    if not final.valid:
        raise CertificateError("converted tuple failed the multiphase check")
    return out
