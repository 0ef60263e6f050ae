"""Incremental double description: constraint and generator conversion.

The engine works on homogeneous cones {y | c_i . y <= 0}.  State is a
lineality basis plus extreme rays with per-ray tight-row bitmasks;
constraints are inserted in input order and all tie-breaking is
lowest-index-first, so outputs are deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from ..core import RatVec, vec_dot
from .types import (
    Constraint,
    GeneratorRep,
    Polyhedron,
    REL_EQ,
    StrictRowError,
)

ZERO = Fraction(0)


def _scale_integer(v: RatVec) -> RatVec:
    """Positive rescale to coprime integers (direction preserved)."""
    if all(x == 0 for x in v):
        return v
    m = math.lcm(*(x.denominator for x in v))
    ints = [int(x * m) for x in v]
    g = math.gcd(*(abs(i) for i in ints))
    return tuple(Fraction(i // g) for i in ints)


def _canon_line(v: RatVec) -> RatVec:
    v = _scale_integer(v)
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


class _DDCone:
    def __init__(self, dim: int):
        self.dim = dim
        self.lines: list[RatVec] = [
            tuple(Fraction(1 if i == j else 0) for j in range(dim))
            for i in range(dim)
        ]
        self.rays: list[RatVec] = []
        self.tight: list[int] = []  # bitmask of inserted rows tight at each ray
        self.num_rows = 0

    def insert(self, row: RatVec) -> None:
        i = self.num_rows
        self.num_rows += 1
        line_vals = [vec_dot(row, l) for l in self.lines]
        pivot = next((k for k, d in enumerate(line_vals) if d != 0), None)

        if pivot is not None:
            d0 = line_vals[pivot]
            l0 = self.lines[pivot]
            new_lines = []
            for k, l in enumerate(self.lines):
                if k == pivot:
                    continue
                d = line_vals[k]
                new_lines.append(l if d == 0 else tuple(
                    a - d / d0 * b for a, b in zip(l, l0)))
            new_rays = []
            for r in self.rays:
                d = vec_dot(row, r)
                new_rays.append(r if d == 0 else tuple(
                    a - d / d0 * b for a, b in zip(r, l0)))
            demoted = l0 if d0 < 0 else tuple(-a for a in l0)
            self.lines = [_canon_line(l) for l in new_lines]
            self.rays = [_scale_integer(r) for r in new_rays]
            self.tight = [t | (1 << i) for t in self.tight]
            self.rays.append(_scale_integer(demoted))
            self.tight.append((1 << i) - 1)
            return

        neg, zero, pos = [], [], []
        for k, r in enumerate(self.rays):
            d = vec_dot(row, r)
            if d < 0:
                neg.append((k, d))
            elif d == 0:
                zero.append(k)
            else:
                pos.append((k, d))
        if not pos:
            for k in zero:
                self.tight[k] |= 1 << i
            return

        keep_rays = [self.rays[k] for k, _ in neg] + [self.rays[k] for k in zero]
        keep_tight = [self.tight[k] for k, _ in neg] + \
                     [self.tight[k] | (1 << i) for k in zero]

        seen = set(keep_rays)
        for kp, dp in pos:
            for kn, dn in neg:
                meet = self.tight[kp] & self.tight[kn]
                if not self._adjacent(kp, kn, meet):
                    continue
                combo = tuple(dp * a - dn * b
                              for a, b in zip(self.rays[kn], self.rays[kp]))
                combo = _scale_integer(combo)
                if all(x == 0 for x in combo) or combo in seen:
                    continue
                seen.add(combo)
                keep_rays.append(combo)
                keep_tight.append(meet | (1 << i))
        self.rays = keep_rays
        self.tight = keep_tight

    def _adjacent(self, a: int, b: int, meet: int) -> bool:
        for k in range(len(self.rays)):
            if k == a or k == b:
                continue
            if self.tight[k] & meet == meet:
                return False
        return True


def dd_cone(dim: int, rows: Iterable[RatVec]) -> tuple[list[RatVec], list[RatVec]]:
    """Extreme rays and lineality of {y | row . y <= 0 for all rows}."""
    cone = _DDCone(dim)
    for row in rows:
        cone.insert(row)
    return cone.lines, cone.rays


def generators(p: Polyhedron) -> GeneratorRep:
    """Vertex/ray representation with conv(V) + cone(R) = p exactly.

    Lineality directions are emitted as opposite ray pairs.  An empty
    polyhedron yields empty vertex and ray lists.
    """
    cached = p._cache.get("generators")
    if cached is not None:
        return cached
    if p.has_strict_rows():
        raise StrictRowError("generator conversion needs closed rows")

    n = p.dim
    hom_rows: list[RatVec] = [tuple(Fraction(0) for _ in range(n)) + (Fraction(-1),)]
    for c in p.constraints:
        base = c.coeffs + (-c.rhs,)
        hom_rows.append(base)
        if c.rel == REL_EQ:
            hom_rows.append(tuple(-x for x in base))
    lines, rays = dd_cone(n + 1, hom_rows)

    vertices: list[RatVec] = []
    rec_rays: list[RatVec] = []
    for r in rays:
        t = r[n]
        if t > 0:
            vertices.append(tuple(x / t for x in r[:n]))
        else:
            rec_rays.append(r[:n])
    for l in lines:
        rec_rays.append(l[:n])
        rec_rays.append(tuple(-x for x in l[:n]))

    if not vertices:
        rep = GeneratorRep((), ())
    else:
        rep = GeneratorRep(tuple(vertices),
                           tuple(_scale_integer(r) for r in rec_rays))
    p._cache["generators"] = rep
    return rep


def from_generators(dim: int, rep: GeneratorRep) -> Polyhedron:
    """Constraint representation of conv(vertices) + cone(rays),
    computed by double description on the polar cone."""
    if rep.is_empty():
        return Polyhedron.empty(dim)
    rows: list[RatVec] = [v + (Fraction(1),) for v in rep.vertices]
    rows += [r + (Fraction(0),) for r in rep.rays]
    lines, rays = dd_cone(dim + 1, rows)
    constraints = []
    for a in rays:
        if all(x == 0 for x in a[:dim]):
            continue  # 0 <= k with k >= 0, trivially true
        constraints.append(Constraint(a[:dim], "<=", -a[dim]))
    for a in lines:
        constraints.append(Constraint(a[:dim], REL_EQ, -a[dim]))
    return Polyhedron(dim, constraints)
