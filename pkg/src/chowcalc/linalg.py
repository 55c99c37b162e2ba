"""Exact integer linear algebra on small dense matrices."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

_PRIME = (1 << 61) - 1


def _rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    mat = [[x % p for x in row] for row in rows if any(row)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        prow = [(x * inv) % p for x in mat[rank]]
        mat[rank] = prow
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _rank_exact(rows: Sequence[Sequence[int]]) -> int:
    mat = [[Fraction(x) for x in row] for row in rows if any(row)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        prow = mat[rank]
        for i in range(rank + 1, len(mat)):
            if mat[i][col]:
                f = mat[i][col] / prow[col]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        rank += 1
    return rank


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q.  Full rank modulo a large prime settles it; otherwise recompute exactly."""
    if not rows:
        return 0
    ncols = len(rows[0])
    r = _rank_mod_p(rows, _PRIME)
    if r == min(ncols, len(rows)):
        return r
    return _rank_exact(rows)


def determinant(mat: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def transpose(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*mat)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def find_congruence(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], lo: int = -2, hi: int = 2):
    """Exhaustive search for g in GL_n(Z) with entries in [lo, hi] and g^T a g = b."""
    n = len(a)
    for entries in product(range(lo, hi + 1), repeat=n * n):
        g = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if abs(determinant(g)) != 1:
            continue
        if matmul(matmul(transpose(g), a), g) == [list(r) for r in b]:
            return g
    return None
