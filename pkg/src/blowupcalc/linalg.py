"""Exact Gaussian elimination over the rationals.

Small and self-contained: the rank certificate and the fiber-sum solver
need exact ranks and one particular solution each, which is cheaper to
do directly on Fractions than to route through a symbolic package.
"""

from __future__ import annotations

from fractions import Fraction


def rank_with_pivots(matrix: list[list[Fraction]]) -> tuple[int, list[tuple[int, int]]]:
    """Rank of a matrix plus the (row, column) pivot positions found.

    Columns are processed left to right, so with linearly independent
    columns the i-th pivot belongs to the i-th column.
    """
    if not matrix:
        return 0, []
    rows = [list(r) for r in matrix]
    nrows, ncols = len(rows), len(rows[0])
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv = Fraction(1) / rows[row][col]
        rows[row] = [x * inv for x in rows[row]]
        for r in range(nrows):
            if r != row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[row])]
        pivots.append((row, col))
        row += 1
        if row == nrows:
            break
    return len(pivots), pivots


def rank(matrix: list[list[Fraction]]) -> int:
    return rank_with_pivots(matrix)[0]


def solve_particular(
    matrix: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction] | None:
    """One exact solution of A x = b with free variables set to 0, or None.

    Returns None exactly when the system is inconsistent.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = Fraction(1) / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[row])]
        pivot_cols.append(col)
        row += 1
        if row == nrows:
            break
    for r in range(row, nrows):
        if aug[r][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivot_cols):
        x[col] = aug[r][ncols]
    return x
