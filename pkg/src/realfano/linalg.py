"""Exact linear algebra on rational matrices (lists of lists of Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def lincomb(a, m: Matrix, b, k: Matrix) -> Matrix:
    """``a*m + b*k`` entrywise."""
    return [[a * x + b * y for x, y in zip(r, s)] for r, s in zip(m, k)]


def congruent(m: Matrix, a: Matrix) -> Matrix:
    """``aᵀ m a``."""
    return matmul(transpose(a), matmul(m, a))


def det(m: Matrix) -> Fraction:
    """Determinant by Gaussian elimination with exact pivoting."""
    a = [row[:] for row in m]
    n = len(a)
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row_r, row_c = a[r], a[col]
                for c in range(col + 1, n):
                    row_r[c] -= f * row_c[c]
    return result


def inertia(m: Matrix) -> tuple[int, int, int]:
    """Exact inertia ``(n_plus, n_zero, n_minus)`` of a symmetric matrix.

    Diagonalizes by congruence.  A nonzero diagonal entry is used as pivot
    when one exists; otherwise a nonzero off-diagonal entry ``a[i][j]`` is
    moved onto the diagonal by the congruence ``row_i += row_j`` (which
    gives ``2*a[i][j]`` there, since both diagonal entries vanish).
    """
    a = [row[:] for row in m]
    plus = minus = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                return plus, n, minus
            i, j = pair
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            plus += 1
        else:
            minus += 1
        rest = [r for r in range(n) if r != piv]
        a = [[a[r][c] - a[r][piv] * a[piv][c] / p for c in rest] for r in rest]
    return plus, 0, minus
