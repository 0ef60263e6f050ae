"""Polyhedra in constraint form, generator form, and certificate types."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ..core import (
    AffineFunc,
    DimensionMismatchError,
    RatVec,
    rat,
    rat_str,
    vec,
    vec_dot,
)

REL_LE = "<="
REL_LT = "<"
REL_EQ = "="


class StrictRowError(ValueError):
    """An operation that requires closed constraints met a strict row."""


class CertificateError(RuntimeError):
    """A certificate failed exact re-verification (internal error)."""


@dataclass(frozen=True)
class Constraint:
    """A single row: coeffs . x  <= / < / =  rhs."""

    coeffs: RatVec
    rel: str
    rhs: Fraction

    @staticmethod
    def make(coeffs: Iterable, rel: str, rhs) -> "Constraint":
        if rel not in (REL_LE, REL_LT, REL_EQ):
            raise ValueError(f"bad relation {rel!r}")
        return Constraint(vec(coeffs), rel, rat(rhs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def slack(self, point: RatVec) -> Fraction:
        """rhs - coeffs . point (nonnegative iff a <= row is satisfied)."""
        return self.rhs - vec_dot(self.coeffs, point)

    def satisfied_by(self, point: RatVec) -> bool:
        s = self.slack(point)
        if self.rel == REL_LE:
            return s >= 0
        if self.rel == REL_LT:
            return s > 0
        return s == 0

    def scaled_integer(self) -> "Constraint":
        """Equivalent row with coprime integer coefficients and rhs."""
        denoms = [c.denominator for c in self.coeffs] + [self.rhs.denominator]
        m = math.lcm(*denoms)
        ints = [int(c * m) for c in self.coeffs] + [int(self.rhs * m)]
        g = math.gcd(*(abs(v) for v in ints))
        if g > 1:
            ints = [v // g for v in ints]
        return Constraint(vec(ints[:-1]), self.rel, Fraction(ints[-1]))

    def format(self, names: Sequence[str]) -> str:
        terms = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            if c == 1:
                terms.append(f"+ {name}")
            elif c == -1:
                terms.append(f"- {name}")
            elif c > 0:
                terms.append(f"+ {rat_str(c)}*{name}")
            else:
                terms.append(f"- {rat_str(-c)}*{name}")
        if not terms:
            lhs = "0"
        else:
            lhs = " ".join(terms)
            if lhs.startswith("+ "):
                lhs = lhs[2:]
        return f"{lhs} {self.rel} {rat_str(self.rhs)}"


def nonneg_constraint(f: AffineFunc) -> Constraint:
    """Row expressing f(x) >= 0."""
    return Constraint(tuple(-c for c in f.coeffs), REL_LE, f.const)

def nonpos_constraint(f: AffineFunc) -> Constraint:
    """Row expressing f(x) <= 0."""
    return Constraint(f.coeffs, REL_LE, -f.const)

def neg_constraint(f: AffineFunc) -> Constraint:
    """Row expressing f(x) < 0."""
    return Constraint(f.coeffs, REL_LT, -f.const)

def lt_one_constraint(f: AffineFunc) -> Constraint:
    """Row expressing f(x) < 1."""
    return Constraint(f.coeffs, REL_LT, Fraction(1) - f.const)

def eq_constraint(f: AffineFunc) -> Constraint:
    """Row expressing f(x) = 0."""
    return Constraint(f.coeffs, REL_EQ, -f.const)


class Polyhedron:
    """A rational polyhedron given by constraint rows.

    Rows may be strict; operations that need a closed set raise
    StrictRowError when one is present.  Derived facts (feasibility,
    generators) are cached; instances should be treated as immutable
    and not shared across writers.
    """

    def __init__(self, dim: int, constraints: Iterable[Constraint] = ()):
        self.dim = dim
        self.constraints: tuple[Constraint, ...] = tuple(constraints)
        for c in self.constraints:
            if c.dim != dim:
                raise DimensionMismatchError(
                    f"constraint dim {c.dim} in {dim}-dim polyhedron")
        self._cache: dict = {}

    @staticmethod
    def empty(dim: int) -> "Polyhedron":
        zero = vec([0] * dim)
        return Polyhedron(dim, [Constraint(zero, REL_LE, Fraction(-1))])

    @staticmethod
    def universe(dim: int) -> "Polyhedron":
        return Polyhedron(dim, [])

    def with_rows(self, extra: Iterable[Constraint]) -> "Polyhedron":
        return Polyhedron(self.dim, self.constraints + tuple(extra))

    def has_strict_rows(self) -> bool:
        return any(c.rel == REL_LT for c in self.constraints)

    def closure(self) -> "Polyhedron":
        """The same rows with strict relations relaxed to nonstrict."""
        rows = [
            Constraint(c.coeffs, REL_LE, c.rhs) if c.rel == REL_LT else c
            for c in self.constraints
        ]
        return Polyhedron(self.dim, rows)

    def le_rows(self) -> list[Constraint]:
        """All rows as <= rows (equalities doubled, strict rows rejected)."""
        out = []
        for c in self.constraints:
            if c.rel == REL_LT:
                raise StrictRowError("closed-row view of a strict polyhedron")
            if c.rel == REL_EQ:
                out.append(Constraint(c.coeffs, REL_LE, c.rhs))
                out.append(Constraint(tuple(-x for x in c.coeffs), REL_LE, -c.rhs))
            else:
                out.append(c)
        return out

    def contains(self, point: RatVec) -> bool:
        if len(point) != self.dim:
            raise DimensionMismatchError(
                f"point dim {len(point)} in {self.dim}-dim polyhedron")
        return all(c.satisfied_by(point) for c in self.constraints)

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"v{i + 1}" for i in range(self.dim)]
        return "\n".join(c.format(names) for c in self.constraints)

    def __repr__(self) -> str:
        return f"Polyhedron(dim={self.dim}, rows={len(self.constraints)})"


@dataclass(frozen=True)
class GeneratorRep:
    """Vertices plus recession rays: conv(vertices) + cone(rays)."""

    vertices: tuple[RatVec, ...]
    rays: tuple[RatVec, ...]

    def is_empty(self) -> bool:
        return not self.vertices


@dataclass
class FarkasCert:
    """Nonnegative multipliers proving f >= 0 over a polyhedron.

    The recombination identity, checked exactly on construction, is
    f = sum_i multipliers_i * (rhs_i - row_i . x) + slack with the rows
    taken from `rows` (a <=-only view) and slack >= 0.  A vacuous
    certificate instead proves the polyhedron empty:
    sum_i multipliers_i * row_i = 0 and sum_i multipliers_i * rhs_i < 0.
    """

    multipliers: RatVec
    rows: tuple[Constraint, ...]
    slack: Fraction = Fraction(0)
    vacuous: bool = False

    def verify(self, f: AffineFunc) -> None:
        if any(m < 0 for m in self.multipliers):
            raise CertificateError("negative Farkas multiplier")
        if len(self.multipliers) != len(self.rows):
            raise CertificateError("multiplier/row count mismatch")
        dim = self.rows[0].dim if self.rows else f.dim
        combo = [Fraction(0)] * dim
        const = Fraction(0)
        for m, row in zip(self.multipliers, self.rows):
            if m == 0:
                continue
            for j, c in enumerate(row.coeffs):
                combo[j] -= m * c
            const += m * row.rhs
        if self.vacuous:
            if any(c != 0 for c in combo) or const >= 0:
                raise CertificateError("vacuous certificate does not refute the rows")
            return
        if self.slack < 0:
            raise CertificateError("negative certificate slack")
        if tuple(combo) != f.coeffs or const + self.slack != f.const:
            raise CertificateError("certificate recombination mismatch")

    def as_strings(self) -> dict:
        out = {"multipliers": [rat_str(m) for m in self.multipliers],
               "slack": rat_str(self.slack)}
        if self.vacuous:
            out["vacuous"] = True
        return out


@dataclass
class MuWitness:
    """Nonnegative combination weights mu_1..mu_{k-1} from the
    alternation lemmas; the certified combined function is
    sum_j mu_j * f_j + f_k >= 0 over the source polyhedron."""

    mus: tuple[Fraction, ...]
    cert: Optional[FarkasCert] = None

    def as_strings(self) -> list[str]:
        return [rat_str(m) for m in self.mus]
