"""Exact integer linear algebra used by the geometric predicates.

Everything here works on plain Python ints (arbitrary precision); no
floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide out the content of an integer vector (zero stays zero)."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for s in range(k + 1, n):
                if m[s][k] != 0:
                    m[k], m[s] = m[s], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - f * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def normal_vector(vectors: Sequence[Sequence[int]]) -> Vector:
    """Primitive integer vector orthogonal to ``d - 1`` vectors in Z^d.

    Generalised cross product via signed maximal minors. Returns the zero
    vector when the inputs are linearly dependent.
    """
    k = len(vectors)
    d = k + 1
    if d == 2:
        (a, b), = vectors
        return primitive((-b, a))
    if d == 3:
        (a, b, c), (e, f, g) = vectors
        return primitive((b * g - c * f, c * e - a * g, a * f - b * e))
    out = []
    for col in range(d):
        minor = [[row[j] for j in range(d) if j != col] for row in vectors]
        s = det(minor)
        out.append(s if (col + d - 1) % 2 == 0 else -s)
    return primitive(out)


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix (fraction-free row reduction)."""
    basis: list[tuple[int, list[int]]] = []
    r = 0
    for row in rows:
        if _reduce_into(basis, list(row)):
            r += 1
    return r


def _reduce_into(basis: list[tuple[int, list[int]]], v: list[int]) -> bool:
    """Reduce ``v`` against an echelon ``basis``; append it if independent."""
    for piv, b in basis:
        if v[piv]:
            f, g = b[piv], v[piv]
            v = [f * x - g * y for x, y in zip(v, b)]
            c = content(v)
            if c > 1:
                v = [x // c for x in v]
    for i, x in enumerate(v):
        if x:
            basis.append((i, v))
            return True
    return False


class EchelonBasis:
    """Incrementally maintained basis of a subspace of Q^d."""

    def __init__(self) -> None:
        self._rows: list[tuple[int, list[int]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, v: Sequence[int]) -> bool:
        """Add ``v``; return True when it enlarged the span."""
        return _reduce_into(self._rows, list(v))

    def contains(self, v: Sequence[int]) -> bool:
        trial = list(self._rows)
        return not _reduce_into(trial, list(v))


def solve_rational(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Solve the square system ``a x = b`` over Q; None when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return None
        m[k], m[p] = m[p], m[k]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k] / m[k][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [m[i][n] / m[i][i] for i in range(n)]
