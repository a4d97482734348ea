"""Exact linear algebra over Q (row reduction on Fractions)."""

from fractions import Fraction


def row_reduce(rows):
    """Return the nonzero rows of the reduced row echelon form of ``rows``."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    width = len(m[0])
    pivot_row = 0
    for col in range(width):
        pivot = next((i for i in range(pivot_row, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[pivot_row], m[pivot] = m[pivot], m[pivot_row]
        lead = m[pivot_row][col]
        m[pivot_row] = [x / lead for x in m[pivot_row]]
        for i in range(len(m)):
            if i != pivot_row and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return [row for row in m[:pivot_row]]


def rank(rows) -> int:
    return len(row_reduce(rows))
