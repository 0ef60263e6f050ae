"""Feasibility, optimization, and certificate extraction for polyhedra.

All results carry exact witnesses: feasible points, improving rays,
or nonnegative-multiplier certificates that are re-verified by exact
recombination before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..core import AffineFunc, RatVec, eval_affine, vec_dot
from .simplex import EQ, LE, solve_lp
from .types import (
    CertificateError,
    FarkasCert,
    MuWitness,
    Polyhedron,
    REL_EQ,
    REL_LT,
    StrictRowError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class InfeasiblePolyhedronError(ValueError):
    """An operation that requires a nonempty polyhedron got an empty one."""


@dataclass(frozen=True)
class Feasibility:
    witness: Optional[RatVec]

    @property
    def feasible(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class OptResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: Optional[Fraction] = None
    point: Optional[RatVec] = None
    ray: Optional[RatVec] = None


@dataclass(frozen=True)
class Implication:
    """Outcome of an entailment check P |= f >= 0."""

    holds: bool
    cert: Optional[FarkasCert] = None
    counterexample: Optional[RatVec] = None


def _lp_rows(p: Polyhedron):
    rows = []
    for c in p.constraints:
        if c.rel == REL_LT:
            raise StrictRowError("strict row where a closed one is required")
        rows.append((c.coeffs, EQ if c.rel == REL_EQ else LE, c.rhs))
    return rows


def is_feasible(p: Polyhedron) -> Feasibility:
    """Exact feasibility; strict rows are honored exactly.

    A mixed strict/nonstrict system is decided by maximizing a shared
    slack t on the strict rows, capped at 1: the system has a solution
    iff the optimum is positive.
    """
    cached = p._cache.get("feasibility")
    if cached is not None:
        return cached

    strict = [c for c in p.constraints if c.rel == REL_LT]
    if not strict:
        result = solve_lp(p.dim, _lp_rows(p))
        feas = Feasibility(result.point if result.status == "optimal" else None)
    else:
        n = p.dim
        rows = []
        for c in p.constraints:
            t_coeff = ONE if c.rel == REL_LT else ZERO
            rel = EQ if c.rel == REL_EQ else LE
            rows.append((c.coeffs + (t_coeff,), rel, c.rhs))
        cap = (ZERO,) * n + (ONE,)
        rows.append((cap, LE, ONE))
        objective = (ZERO,) * n + (-ONE,)
        result = solve_lp(n + 1, rows, objective)
        if result.status != "optimal" or -result.value <= 0:
            feas = Feasibility(None)
        else:
            feas = Feasibility(result.point[:n])

    if feas.feasible:
        assert p.contains(feas.witness)
    p._cache["feasibility"] = feas
    return feas


def optimize(p: Polyhedron, objective: AffineFunc, sense: str = "min") -> OptResult:
    """Exact optimum of an affine objective over a closed polyhedron."""
    if sense not in ("min", "max"):
        raise ValueError(f"bad sense {sense!r}")
    if objective.dim != p.dim:
        raise ValueError("objective dimension mismatch")
    coeffs = objective.coeffs if sense == "min" else tuple(-c for c in objective.coeffs)
    result = solve_lp(p.dim, _lp_rows(p), coeffs)
    if result.status == "infeasible":
        return OptResult(status="infeasible")
    if result.status == "unbounded":
        return OptResult(status="unbounded", point=result.point, ray=result.ray)
    value = result.value + objective.const if sense == "min" else -result.value + objective.const
    return OptResult(status="optimal", value=value, point=result.point)


def implies_nonneg(p: Polyhedron, f: AffineFunc) -> Implication:
    """Decide whether f(x) >= 0 for every x in p, with certificate.

    On Holds the certificate recombines f exactly from the rows of p
    (equalities contribute two <= rows); over an infeasible p a
    vacuous certificate refuting the rows themselves is returned.
    On Fails the counterexample is a genuine member of p with f < 0.
    """
    if f.dim != p.dim:
        raise ValueError("function dimension mismatch")
    le_rows = p.le_rows()
    lp_rows = [(c.coeffs, LE, c.rhs) for c in le_rows]
    result = solve_lp(p.dim, lp_rows, f.coeffs)

    if result.status == "infeasible":
        cert = FarkasCert(multipliers=tuple(result.farkas), rows=tuple(le_rows),
                          vacuous=True)
        cert.verify(f)
        return Implication(holds=True, cert=cert)

    if result.status == "optimal":
        value = result.value + f.const
        if value >= 0:
            cert = FarkasCert(multipliers=tuple(-d for d in result.duals),
                              rows=tuple(le_rows), slack=value)
            cert.verify(f)
            return Implication(holds=True, cert=cert)
        witness = result.point
    else:
        base = result.point
        descent = vec_dot(f.coeffs, result.ray)
        if descent >= 0:
            raise CertificateError("unbounded ray does not improve the objective")
        t = (eval_affine(f, base) + 1) / -descent
        if t < 1:
            t = ONE
        witness = tuple(b + t * r for b, r in zip(base, result.ray))

    if not p.contains(witness) or eval_affine(f, witness) >= 0:
        raise CertificateError("counterexample failed exact re-check")
    return Implication(holds=False, counterexample=witness)


def multiplier_combination(
    p: Polyhedron,
    fs: Sequence[AffineFunc],
    fk: AffineFunc,
    maximize_last: bool = False,
    cap: Optional[Fraction] = None,
) -> Optional[MuWitness]:
    """Find mu_j >= 0 with sum_j mu_j fs[j] + fk >= 0 over p.

    The search is a pure multiplier LP: the combination must equal a
    nonnegative combination of the rows of p plus a nonnegative slack,
    coefficient by coefficient.  With maximize_last, the last mu is
    maximized subject to mu <= cap instead of plain feasibility.
    Returns None when no such multipliers exist.
    """
    if not is_feasible(p).feasible:
        raise InfeasiblePolyhedronError("multiplier combination over an empty polyhedron")
    k1 = len(fs)
    le_rows = p.le_rows()
    m = len(le_rows)
    num = k1 + m + 1  # mu | lambda | slack
    rows = []
    for coord in range(p.dim):
        coeffs = ([fs[j].coeffs[coord] for j in range(k1)]
                  + [le_rows[i].coeffs[coord] for i in range(m)]
                  + [ZERO])
        rows.append((tuple(coeffs), EQ, -fk.coeffs[coord]))
    coeffs = ([fs[j].const for j in range(k1)]
              + [-le_rows[i].rhs for i in range(m)]
              + [-ONE])
    rows.append((tuple(coeffs), EQ, -fk.const))

    objective = None
    if maximize_last:
        if k1 == 0:
            raise ValueError("maximize_last requires at least one mu")
        if cap is not None:
            cap_row = tuple(ONE if j == k1 - 1 else ZERO for j in range(num))
            rows.append((cap_row, LE, cap))
        objective = tuple(-ONE if j == k1 - 1 else ZERO for j in range(num))

    result = solve_lp(num, rows, objective, nonneg=[True] * num)
    if result.status == "infeasible":
        return None
    assert result.status == "optimal"
    mus = tuple(result.point[:k1])

    combined = fk
    for mu, f in zip(mus, fs):
        combined = combined + f.scale(mu)
    proof = implies_nonneg(p, combined)
    if not proof.holds:
        raise CertificateError("multiplier combination failed re-verification")
    return MuWitness(mus=mus, cert=proof.cert)


def motzkin_combine_strict(
    p: Polyhedron, fs: Sequence[AffineFunc], fk: AffineFunc
) -> Optional[MuWitness]:
    """Multipliers for the strict-disjunction alternation lemma:
    given f_1 > 0 or ... or f_{k-1} > 0 or fk >= 0 over nonempty p,
    produce mu >= 0 with sum mu_j f_j + fk >= 0 over p."""
    return multiplier_combination(p, fs, fk)


def conic_combine_nonneg(
    p: Polyhedron, fs: Sequence[AffineFunc]
) -> Optional[MuWitness]:
    """Multipliers for the nonstrict-disjunction lemma, normalized so
    the last function enters with weight 1."""
    if not fs:
        raise ValueError("need at least one function")
    return multiplier_combination(p, list(fs[:-1]), fs[-1])


def remove_redundant_rows(p: Polyhedron) -> Polyhedron:
    """Drop <= rows implied by the remaining ones (greedy, in order)."""
    rows = list(p.constraints)
    i = 0
    while i < len(rows):
        c = rows[i]
        if c.rel != REL_LT and c.rel != REL_EQ:
            rest = Polyhedron(p.dim, rows[:i] + rows[i + 1:])
            slack = AffineFunc(tuple(-x for x in c.coeffs), c.rhs)
            if implies_nonneg(rest, slack).holds:
                rows.pop(i)
                continue
        i += 1
    return Polyhedron(p.dim, rows)
