"""Exact linear algebra over Gaussian rationals (small dense matrices)."""

from __future__ import annotations

from typing import Sequence

from .errors import NotInvertible
from .scalars import Gauss, ONE, ZERO

Mat = tuple[tuple[Gauss, ...], ...]


def mat(rows: Sequence[Sequence]) -> Mat:
    return tuple(
        tuple(c if type(c) is Gauss else Gauss(c) for c in row) for row in rows
    )


def identity(n: int) -> Mat:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def mul(a: Mat, b: Mat) -> Mat:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(
            sum((a[i][t] * b[t][j] for t in range(k)), ZERO) for j in range(m)
        )
        for i in range(n)
    )


def det(a: Mat) -> Gauss:
    n = len(a)
    m = [list(row) for row in a]
    out = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            out = -out
        out = out * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return out


def inverse(a: Mat) -> Mat:
    n = len(a)
    m = [list(row) + list(identity(n)[i]) for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            raise NotInvertible("singular scalar matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r == col or m[r][col].is_zero():
                continue
            f = m[r][col]
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def transpose(a: Mat) -> Mat:
    return tuple(tuple(col) for col in zip(*a))


def permutation(perm: Sequence[int]) -> Mat:
    """Matrix with columns e_{perm[j]}: maps basis vector j to perm[j] (0-based)."""
    n = len(perm)
    return tuple(
        tuple(ONE if i == perm[j] else ZERO for j in range(n)) for i in range(n)
    )
