"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int], int]:
    """Reduced row echelon form in place; returns (rows, pivot columns, swaps)."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    swaps = 0
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            swaps += 1
        piv = rows[r][c]
        rows[r] = [a / piv for a in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots, swaps


def rank(matrix: Sequence[Sequence]) -> int:
    rows = [[Fraction(a) for a in row] for row in matrix]
    if not rows:
        return 0
    return len(_echelon(rows)[1])


def solve_square(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique solution of ``A z = b`` or ``None`` when ``A`` is singular."""
    n = len(matrix)
    aug = [[Fraction(a) for a in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    rows, pivots, _ = _echelon(aug)
    if pivots != list(range(n)):
        return None
    return [rows[i][n] for i in range(n)]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(a) for a in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det *= piv
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det
