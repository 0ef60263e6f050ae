"""Integer hull of a rational polyhedron.

Pipeline: (1) solve the implicit-equality subsystem over the integers
by lattice reduction and substitute it away; (2) project out lineality
along a saturated kernel basis; (3) on the remaining pointed
full-dimensional polyhedron, add rounding cuts derived from the tight
rows at non-integral vertices until every vertex is integral; (4) map
back.  The result is conv(P intersect Z^n): integral, contained in P,
and with the recession cone of P.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from ..core import AffineFunc, RatVec, vec_dot
from .doubledesc import _DDCone
from .hermite import column_echelon, integer_inverse, kernel_complement
from .lp import implies_nonneg, is_feasible, remove_redundant_rows
from .types import Constraint, Polyhedron, REL_EQ, REL_LE, StrictRowError

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_CUT_LIMIT = 10000


class HullIterationError(RuntimeError):
    """The cut loop exceeded its budget; carries progress details."""

    def __init__(self, cuts_added: int, limit: int):
        super().__init__(
            f"integer hull did not converge within {limit} cuts "
            f"({cuts_added} added)")
        self.cuts_added = cuts_added
        self.limit = limit


def _int_rows(constraints) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for c in constraints:
        s = c.scaled_integer()
        out.append((tuple(int(x) for x in s.coeffs), int(s.rhs)))
    return out


def _split_equalities(p: Polyhedron):
    """Partition rows into the equality system and genuine inequalities.

    A <= row is an implicit equality when its reverse inequality also
    holds over p; those are moved to the equality system.
    """
    eqs: list[Constraint] = []
    ineqs: list[Constraint] = []
    for c in p.constraints:
        if c.rel == REL_EQ:
            eqs.append(c)
            continue
        reverse = AffineFunc(c.coeffs, -c.rhs)  # coeffs . x - rhs >= 0
        if implies_nonneg(p, reverse).holds:
            eqs.append(Constraint(c.coeffs, REL_EQ, c.rhs))
        else:
            ineqs.append(c)
    return eqs, ineqs


def _solve_equalities(eqs, dim) -> Optional[tuple[list[int], list[list[int]], list[list[int]]]]:
    """Integer solutions of the equality system as x0 + lattice(basis).

    Returns (x0, basis, left_inverse) with left_inverse @ basis = I, or
    None when the system has no integer solution.  With no equalities
    the identity decomposition is returned.
    """
    mat = []
    rhs = []
    for c in eqs:
        s = c.scaled_integer()
        mat.append([int(x) for x in s.coeffs])
        rhs.append(int(s.rhs))
    if not mat:
        ident = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        return [0] * dim, ident, ident
    h, u, pivots = column_echelon(mat, dim)
    w = [0] * dim
    used = set()
    for row, col in pivots:
        used.add(row)
        residual = rhs[row] - sum(h[row][j] * w[j] for j in range(col))
        if residual % h[row][col] != 0:
            return None
        w[col] = residual // h[row][col]
    for row in range(len(mat)):
        if row not in used and sum(h[row][j] * w[j] for j in range(dim)) != rhs[row]:
            return None
    x0 = [sum(u[i][j] * w[j] for j in range(dim)) for i in range(dim)]
    rank = len(pivots)
    basis = [[u[i][j] for j in range(rank, dim)] for i in range(dim)]  # dim x k
    uinv = integer_inverse(u)
    left = [uinv[j] for j in range(rank, dim)]  # k x dim
    return x0, basis, left


class _CutState:
    """Pointed full-dimensional polyhedron under incremental cutting."""

    def __init__(self, dim: int, rows: list[tuple[tuple[int, ...], int]]):
        self.dim = dim
        self.rows: list[tuple[tuple[int, ...], int]] = []
        self.seen: set = set()
        self.cone = _DDCone(dim + 1)
        self.cone.insert(tuple(ZERO for _ in range(dim)) + (-ONE,))
        for row in rows:
            self.add_row(row)

    def add_row(self, row: tuple[tuple[int, ...], int]) -> bool:
        if row in self.seen:
            return False
        self.seen.add(row)
        self.rows.append(row)
        coeffs, rhs = row
        self.cone.insert(tuple(Fraction(c) for c in coeffs) + (Fraction(-rhs),))
        return True

    def vertices(self) -> list[RatVec]:
        out = []
        for r in self.cone.rays:
            t = r[self.dim]
            if t > 0:
                out.append(tuple(x / t for x in r[: self.dim]))
        return sorted(out)

    def rays(self) -> list[RatVec]:
        out = [r[: self.dim] for r in self.cone.rays if r[self.dim] == 0]
        for l in self.cone.lines:
            out.append(l[: self.dim])
            out.append(tuple(-x for x in l[: self.dim]))
        return out


def _tight_basis(state: _CutState, v: RatVec):
    """First maximal independent set of rows tight at v, in row order."""
    dim = state.dim
    basis_rows = []
    reduced: list[list[Fraction]] = []
    for coeffs, rhs in state.rows:
        if vec_dot(tuple(Fraction(c) for c in coeffs), v) != rhs:
            continue
        work = [Fraction(c) for c in coeffs]
        for red in reduced:
            lead = next((j for j, x in enumerate(red) if x != 0))
            if work[lead] != 0:
                f = work[lead] / red[lead]
                work = [a - f * b for a, b in zip(work, red)]
        if any(x != 0 for x in work):
            reduced.append(work)
            basis_rows.append((coeffs, rhs))
            if len(basis_rows) == dim:
                break
    return basis_rows


def _matrix_inverse(rows: list[tuple[int, ...]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)] +
           [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _gomory_cuts(state: _CutState, v: RatVec) -> list[tuple[tuple[int, ...], int]]:
    """Rounding cuts from the tight-row basis at a fractional vertex."""
    basis = _tight_basis(state, v)
    assert len(basis) == state.dim, "vertex without a full tight basis"
    b_rows = [coeffs for coeffs, _ in basis]
    b_rhs = [rhs for _, rhs in basis]
    inv = _matrix_inverse(b_rows)
    cuts = []
    for i in range(state.dim):
        if v[i].denominator == 1:
            continue
        w = inv[i]
        y = [x - math.floor(x) for x in w]
        coeffs = []
        for j in range(state.dim):
            cj = sum(y[k] * b_rows[k][j] for k in range(state.dim))
            assert cj.denominator == 1
            coeffs.append(int(cj))
        rhs_val = sum(y[k] * b_rhs[k] for k in range(state.dim))
        assert rhs_val.denominator != 1, "cut right-hand side unexpectedly integral"
        cuts.append((tuple(coeffs), math.floor(rhs_val)))
    return cuts


def integer_hull(p: Polyhedron, cut_limit: int = DEFAULT_CUT_LIMIT) -> Polyhedron:
    """conv(p intersect Z^dim) as a polyhedron.

    Returns the canonical empty polyhedron when p has no integer
    points.  Raises HullIterationError past `cut_limit` added cuts.
    """
    if p.has_strict_rows():
        raise StrictRowError("integer hull needs closed rows")
    if not is_feasible(p).feasible:
        return Polyhedron.empty(p.dim)

    n = p.dim
    eqs, ineqs = _split_equalities(p)
    solved = _solve_equalities(eqs, n)
    if solved is None:
        return Polyhedron.empty(n)
    x0, basis, left = solved
    k = len(left)

    # Substitute x = x0 + basis . u into the inequality rows.
    sub_rows: list[tuple[tuple[int, ...], int]] = []
    for c in ineqs:
        s = c.scaled_integer()
        a = [int(x) for x in s.coeffs]
        au = tuple(sum(a[i] * basis[i][j] for i in range(n)) for j in range(k))
        b = int(s.rhs) - sum(a[i] * x0[i] for i in range(n))
        if all(x == 0 for x in au):
            continue  # constant on the affine hull; feasibility already checked
        sub_rows.append(_normalize_int_row(au, Fraction(b)))

    eq_out = []
    seen_eq = set()
    for c in eqs:
        s = c.scaled_integer()
        lead = next((x for x in s.coeffs if x != 0), Fraction(1))
        if lead < 0:
            s = Constraint(tuple(-x for x in s.coeffs), REL_EQ, -s.rhs)
        key = (s.coeffs, s.rhs)
        if key not in seen_eq:
            seen_eq.add(key)
            eq_out.append(s)

    if k == 0:
        rows = [Constraint.make([1 if j == i else 0 for j in range(n)], REL_EQ, x0[i])
                for i in range(n)]
        return Polyhedron(n, rows)

    # Remove lineality along the saturated kernel of the inequality rows.
    a_mat = [list(coeffs) for coeffs, _ in sub_rows]
    if not a_mat:
        return Polyhedron(n, eq_out)
    comp, kernel = kernel_complement(a_mat, k)
    kp = len(comp)
    u_full = [[comp[j][i] for j in range(kp)] + [kernel[j][i] for j in range(len(kernel))]
              for i in range(k)]
    proj = integer_inverse(u_full)[:kp] if kp else []

    v_rows = []
    for coeffs, rhs in sub_rows:
        av = tuple(sum(coeffs[i] * comp[j][i] for i in range(k)) for j in range(kp))
        v_rows.append(_normalize_int_row(av, Fraction(rhs)))

    if kp == 0:
        return Polyhedron(n, eq_out)

    state = _CutState(kp, v_rows)
    cuts_added = 0
    while True:
        verts = state.vertices()
        if not verts:
            return Polyhedron.empty(n)
        fractional = [v for v in verts
                      if any(x.denominator != 1 for x in v)]
        if not fractional:
            break
        target = fractional[0]
        new = 0
        for cut in _gomory_cuts(state, target):
            if state.add_row(cut):
                new += 1
        assert new > 0, "no fresh cut for a fractional vertex"
        cuts_added += new
        if cuts_added > cut_limit:
            raise HullIterationError(cuts_added, cut_limit)

    # Lift v-space rows back to x-space: v = proj . u, u = left . (x - x0).
    out_rows = list(eq_out)
    for coeffs, rhs in state.rows:
        a_u = [sum(coeffs[j] * proj[j][i] for j in range(kp)) for i in range(k)]
        a_x = [sum(a_u[j] * left[j][i] for j in range(k)) for i in range(n)]
        shift = sum(a_x[i] * x0[i] for i in range(n))
        out_rows.append(Constraint.make(a_x, REL_LE, Fraction(rhs) + shift))
    return remove_redundant_rows(Polyhedron(n, out_rows))


def _normalize_int_row(coeffs, rhs: Fraction) -> tuple[tuple[int, ...], int]:
    ints = [int(c) for c in coeffs]
    assert rhs.denominator == 1
    b = int(rhs)
    g = math.gcd(*(abs(c) for c in ints), abs(b))
    if g > 1:
        ints = [c // g for c in ints]
        b = b // g
    return tuple(ints), b
