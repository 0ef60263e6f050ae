"""Hermite-style column reduction for integer linear systems.

Provides exact solutions of E x = e over the integers together with a
basis of the solution lattice.  The reduction keeps the accumulated
unimodular column transform, so kernel bases are saturated and extend
to a basis of the full integer lattice.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

IntMatrix = list[list[int]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def column_echelon(e_mat: IntMatrix, n: int) -> tuple[IntMatrix, IntMatrix, list[tuple[int, int]]]:
    """Column-reduce an integer matrix by unimodular column operations.

    Returns (h, u, pivots) with e_mat @ u = h, u unimodular, and h in
    column echelon form; pivots lists (row, col) of pivot positions in
    order, and columns past the last pivot span the kernel lattice.
    """
    m = len(e_mat)
    h = [list(row) for row in e_mat]
    u = _identity(n)
    pivots: list[tuple[int, int]] = []
    col = 0
    for row in range(m):
        if col >= n:
            break
        # Euclidean reduction across columns col..n-1 on this row.
        while True:
            nonzero = [j for j in range(col, n) if h[row][j] != 0]
            if not nonzero:
                break
            j0 = min(nonzero, key=lambda j: (abs(h[row][j]), j))
            if j0 != col:
                for r in range(m):
                    h[r][col], h[r][j0] = h[r][j0], h[r][col]
                for r in range(n):
                    u[r][col], u[r][j0] = u[r][j0], u[r][col]
            if h[row][col] < 0:
                for r in range(m):
                    h[r][col] = -h[r][col]
                for r in range(n):
                    u[r][col] = -u[r][col]
            done = True
            for j in range(col + 1, n):
                if h[row][j] == 0:
                    continue
                q = h[row][j] // h[row][col]
                if q != 0:
                    for r in range(m):
                        h[r][j] -= q * h[r][col]
                    for r in range(n):
                        u[r][j] -= q * u[r][col]
                if h[row][j] != 0:
                    done = False
            if done:
                break
        if h[row][col] != 0:
            pivots.append((row, col))
            col += 1
    return h, u, pivots


def solve_integer_system(
    e_mat: IntMatrix, rhs: list[int], n: int
) -> Optional[tuple[list[int], list[list[int]]]]:
    """All integer solutions of e_mat @ x = rhs.

    Returns (x0, kernel_basis) so that the solutions are exactly
    x0 + integer combinations of the kernel basis vectors, or None
    when no integer solution exists.  The kernel basis is saturated:
    it extends to a basis of Z^n.
    """
    m = len(e_mat)
    h, u, pivots = column_echelon(e_mat, n)
    w = [0] * n
    consumed_rows = set()
    for row, col in pivots:
        consumed_rows.add(row)
        residual = rhs[row] - sum(h[row][j] * w[j] for j in range(col))
        if residual % h[row][col] != 0:
            return None
        w[col] = residual // h[row][col]
    for row in range(m):
        if row in consumed_rows:
            continue
        if sum(h[row][j] * w[j] for j in range(n)) != rhs[row]:
            return None
    x0 = [sum(u[i][j] * w[j] for j in range(n)) for i in range(n)]
    rank = len(pivots)
    kernel = [[u[i][j] for i in range(n)] for j in range(rank, n)]
    return x0, kernel


def kernel_complement(a_mat: IntMatrix, n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Split Z^n into a kernel-lattice basis of a_mat and a complement.

    Returns (complement, kernel) whose concatenated columns form a
    unimodular basis of Z^n; kernel vectors satisfy a_mat @ v = 0.
    """
    _, u, pivots = column_echelon(a_mat, n)
    rank = len(pivots)
    complement = [[u[i][j] for i in range(n)] for j in range(rank)]
    kernel = [[u[i][j] for i in range(n)] for j in range(rank, n)]
    return complement, kernel


def integer_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (entries stay integer)."""
    n = len(u)
    aug = [[Fraction(u[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r == col or aug[r][col] == 0:
                continue
            f = aug[r][col]
            aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            val = aug[i][n + j]
            if val.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(val))
        inv.append(row)
    return inv
