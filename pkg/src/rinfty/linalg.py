"""Exact linear algebra over the rationals.

Rank uses Bareiss fraction-free elimination on an integer matrix obtained by
clearing denominators row by row; kernels and solves use reduced row echelon
form over :class:`fractions.Fraction`.  Nothing here takes a tolerance.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = Sequence[Sequence]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def rank(rows: Matrix) -> int:
    """Rank by Bareiss elimination; all intermediate values stay integral."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            a = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, ncols):
                # exact division is the Bareiss invariant
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                a = m[i][c]
                m[i] = [x - a * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve(rows: Matrix, rhs: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or ``None`` when the system is inconsistent."""
    ncols = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return x


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Positive rescaling of a nonzero rational vector to a primitive integer one."""
    fr = [Fraction(x) for x in vec]
    den = lcm(*(x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def matvec(rows: Matrix, vec: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, vec)) for row in rows]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def subtract_identity(rows: Matrix) -> list[list]:
    return [[x - (i == j) for j, x in enumerate(row)] for i, row in enumerate(rows)]
