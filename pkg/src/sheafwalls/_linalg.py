"""Small exact linear algebra over ``Fraction``.

Matrices are lists of rows.  Nothing here is fast; dimensions are the Picard
numbers of surfaces, so rarely above four.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [row[:] for row in a]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    if not vectors:
        return 0
    return len(rref(to_matrix(vectors))[1])


def nullspace(a: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : a x = 0}; ``ncols`` is needed when ``a`` has no rows."""
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve_combination(columns: Sequence[Sequence[Fraction]],
                      target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients t with sum t_i * columns[i] == target, or None.

    ``columns`` must be linearly independent.
    """
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(n)]
    m, pivots = rref(aug)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, pc in zip(m, pivots):
        coeffs[pc] = row[k]
    return coeffs


def determinant(a: Matrix) -> Fraction:
    m = [row[:] for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return det
