"""Exact two-phase primal simplex over arbitrary-precision rationals.

Bland's pivoting rule (lowest index on entering and, on ratio ties,
lowest basic variable) is used throughout, so the solver terminates on
every input without cycling.  Minimization only; callers negate the
objective to maximize.

Row relations are "<=" or "="; variables are free unless flagged
nonnegative.  Free variables are split internally into differences of
nonnegative pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..core import RatVec

LE = "<="
EQ = "="

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    """Outcome of an exact LP solve.

    For status "optimal", `duals` holds one multiplier y_i per input
    row satisfying y^T A = objective coefficients, y_i <= 0 for "<="
    rows, and y . rhs = value.  For status "infeasible", `farkas`
    holds lambda_i (nonnegative on "<=" rows) with lambda^T A = 0 and
    lambda . rhs < 0, valid when all variables are free.
    """

    status: str  # "optimal" | "unbounded" | "infeasible"
    point: Optional[RatVec] = None
    value: Optional[Fraction] = None
    ray: Optional[RatVec] = None
    duals: Optional[list[Fraction]] = None
    farkas: Optional[list[Fraction]] = None


class _Tableau:
    def __init__(self, num_vars: int, rows, nonneg: Sequence[bool]):
        self.num_vars = num_vars
        self.num_rows = len(rows)

        # Column layout: structural columns first, then slacks, then
        # artificials (one per row, kept around so that dual values can
        # be read off their reduced costs).
        self.var_cols: list[tuple[int, Optional[int]]] = []
        col = 0
        for j in range(num_vars):
            if nonneg[j]:
                self.var_cols.append((col, None))
                col += 1
            else:
                self.var_cols.append((col, col + 1))
                col += 2
        self.slack_col: list[Optional[int]] = []
        for coeffs, rel, rhs in rows:
            if rel == LE:
                self.slack_col.append(col)
                col += 1
            else:
                self.slack_col.append(None)
        self.first_art = col
        self.art_col = [col + i for i in range(self.num_rows)]
        self.total_cols = col + self.num_rows

        self.flip: list[Fraction] = []
        self.mat: list[list[Fraction]] = []
        self.rhs: list[Fraction] = []
        for i, (coeffs, rel, rhs_val) in enumerate(rows):
            row = [ZERO] * self.total_cols
            for j in range(num_vars):
                c = coeffs[j]
                if c == 0:
                    continue
                up, vp = self.var_cols[j]
                row[up] = c
                if vp is not None:
                    row[vp] = -c
            if self.slack_col[i] is not None:
                row[self.slack_col[i]] = ONE
            sign = ONE if rhs_val >= 0 else -ONE
            if sign < 0:
                row = [-v for v in row]
            row[self.art_col[i]] = ONE
            self.flip.append(sign)
            self.mat.append(row)
            self.rhs.append(sign * rhs_val)

        self.basis = list(self.art_col)
        self.cbar: list[Fraction] = []
        self.obj = ZERO
        self.barred = set()

    def set_costs(self, costs: list[Fraction]) -> None:
        # Rebuild reduced costs for the current basis.
        cbar = list(costs)
        obj = ZERO
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb == 0:
                continue
            row = self.mat[i]
            for j in range(self.total_cols):
                if row[j] != 0:
                    cbar[j] -= cb * row[j]
            obj += cb * self.rhs[i]
        self.cbar = cbar
        self.obj = obj

    def pivot(self, r: int, e: int) -> None:
        row = self.mat[r]
        piv = row[e]
        if piv != 1:
            inv = ONE / piv
            self.mat[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i in range(self.num_rows):
            if i == r:
                continue
            f = self.mat[i][e]
            if f == 0:
                continue
            other = self.mat[i]
            self.mat[i] = [a - f * b for a, b in zip(other, row)]
            self.rhs[i] -= f * self.rhs[r]
        f = self.cbar[e]
        if f != 0:
            self.cbar = [a - f * b for a, b in zip(self.cbar, row)]
            self.obj += f * self.rhs[r]
        self.basis[r] = e

    def run(self) -> str:
        """Bland iterations until optimal or unbounded."""
        while True:
            enter = -1
            for j in range(self.total_cols):
                if j in self.barred:
                    continue
                if self.cbar[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best: Optional[Fraction] = None
            for i in range(self.num_rows):
                a = self.mat[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                self._unbounded_col = enter
                return "unbounded"
            self.pivot(leave, enter)

    def drive_out_artificials(self) -> None:
        for i in range(self.num_rows):
            if self.basis[i] < self.first_art:
                continue
            row = self.mat[i]
            for j in range(self.first_art):
                if row[j] != 0:
                    self.pivot(i, j)
                    break

    def solution(self) -> RatVec:
        values = [ZERO] * self.total_cols
        for i, b in enumerate(self.basis):
            values[b] = self.rhs[i]
        out = []
        for up, vp in self.var_cols:
            x = values[up]
            if vp is not None:
                x -= values[vp]
            out.append(x)
        return tuple(out)

    def ray(self) -> RatVec:
        e = self._unbounded_col
        delta = [ZERO] * self.total_cols
        delta[e] = ONE
        for i, b in enumerate(self.basis):
            delta[b] = -self.mat[i][e]
        out = []
        for up, vp in self.var_cols:
            x = delta[up]
            if vp is not None:
                x -= delta[vp]
            out.append(x)
        return tuple(out)


def solve_lp(
    num_vars: int,
    rows: Sequence[tuple[RatVec, str, Fraction]],
    objective: Optional[RatVec] = None,
    nonneg: Optional[Sequence[bool]] = None,
) -> LPResult:
    """Minimize objective . x subject to the given rows.

    With objective None, solves feasibility only and reports an
    arbitrary feasible point.
    """
    if nonneg is None:
        nonneg = [False] * num_vars
    for coeffs, rel, _ in rows:
        if len(coeffs) != num_vars:
            raise ValueError("row dimension mismatch")
        if rel not in (LE, EQ):
            raise ValueError(f"unsupported relation {rel!r}")

    tab = _Tableau(num_vars, rows, nonneg)

    # Phase 1: minimize the sum of artificials.
    costs1 = [ZERO] * tab.total_cols
    for c in tab.art_col:
        costs1[c] = ONE
    tab.set_costs(costs1)
    status = tab.run()
    assert status == "optimal"
    if tab.obj > 0:
        # pi from phase-1 reduced costs at artificial columns; lambda_i
        # = -flip_i * pi_i is the Farkas combination of original rows.
        farkas = []
        for i in range(tab.num_rows):
            pi = ONE - tab.cbar[tab.art_col[i]]
            farkas.append(-tab.flip[i] * pi)
        return LPResult(status="infeasible", farkas=farkas)

    tab.drive_out_artificials()
    tab.barred = set(tab.art_col)

    if objective is None:
        return LPResult(status="optimal", point=tab.solution(), value=ZERO,
                        duals=[ZERO] * tab.num_rows)

    costs2 = [ZERO] * tab.total_cols
    for j in range(num_vars):
        c = objective[j]
        if c == 0:
            continue
        up, vp = tab.var_cols[j]
        costs2[up] = c
        if vp is not None:
            costs2[vp] = -c
    tab.set_costs(costs2)
    status = tab.run()
    if status == "unbounded":
        return LPResult(status="unbounded", point=tab.solution(), ray=tab.ray())
    duals = []
    for i in range(tab.num_rows):
        pi = -tab.cbar[tab.art_col[i]]
        duals.append(tab.flip[i] * pi)
    return LPResult(status="optimal", point=tab.solution(), value=tab.obj, duals=duals)
