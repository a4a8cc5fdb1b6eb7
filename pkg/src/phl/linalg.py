"""Exact linear algebra over Q.

Rank and span computations run fraction-free on integer rows: every rational
vector is scaled to a primitive integer vector and eliminated with
cross-multiplication, so no rank decision ever depends on a tolerance.
"""
from __future__ import annotations

from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq

from .fields import RATIONAL

__all__ = ["primitive_row", "Echelon", "rank", "nullspace", "det", "inverse", "inertia",
           "matmul", "identity"]


def primitive_row(values: Iterable) -> tuple[list[int], mpq]:
    """Scale a rational vector to a primitive integer vector.

    Returns (ints, scale) with values == scale * ints and the first nonzero
    entry of ints positive.
    """
    vals = [mpq(v) for v in values]
    den = 1
    for v in vals:
        den = lcm(den, int(v.denominator))
    ints = [int(v * den) for v in vals]
    g = 0
    for k in ints:
        g = gcd(g, k)
    if g == 0:
        return ints, mpq(0)
    lead = next(k for k in ints if k)
    if lead < 0:
        g = -g
    return [k // g for k in ints], mpq(g, den)


def _eliminate(row: list[int], pivot_row: list[int], col: int) -> list[int]:
    a, b = pivot_row[col], row[col]
    g = gcd(a, b)
    a, b = a // g, b // g
    out = [a * r - b * p for r, p in zip(row, pivot_row)]
    c = 0
    for k in out:
        c = gcd(c, k)
    return [k // c for k in out] if c > 1 else out


class Echelon:
    """Incrementally maintained fraction-free echelon basis of a row space."""

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, list[int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, values: Sequence) -> list[int]:
        row, _ = primitive_row(values)
        if len(row) != self.width:
            raise ValueError(f"row of length {len(row)} in echelon of width {self.width}")
        for col in sorted(self.rows):
            if row[col]:
                row = _eliminate(row, self.rows[col], col)
        return row

    def contains(self, values: Sequence) -> bool:
        return not any(self.reduce(values))

    def add(self, values: Sequence) -> bool:
        """Insert a vector; True when it enlarged the span."""
        row = self.reduce(values)
        if not any(row):
            return False
        col = next(i for i, k in enumerate(row) if k)
        # keep earlier rows reduced at the new pivot column
        for c, r in self.rows.items():
            if r[col]:
                self.rows[c] = _eliminate(r, row, col)
        self.rows[col] = row
        return True


def rank(rows: Iterable[Sequence]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ech = Echelon(len(rows[0]))
    for r in rows:
        ech.add(r)
    return len(ech)


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[mpq]]:
    """Basis of {v : M v = 0} with rational entries."""
    rows = [list(r) for r in matrix]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    pivots = sorted(ech.rows)
    # back-substitute to reduced form
    for col in reversed(pivots):
        prow = ech.rows[col]
        for c2 in pivots:
            if c2 < col and ech.rows[c2][col]:
                ech.rows[c2] = _eliminate(ech.rows[c2], prow, col)
    free = [c for c in range(ncols) if c not in ech.rows]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for col in pivots:
            r = ech.rows[col]
            v[col] = mpq(-r[f], r[col])
        basis.append(v)
    return basis


def identity(n: int, field=RATIONAL) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0 * a[0][0])
             for j in range(len(b[0]))] for i in range(len(a))]


def det(matrix: Sequence[Sequence]):
    """Exact determinant by elimination (works over Q and Q(i))."""
    m = [[x if type(x).__name__ == "GaussianRational" else mpq(x) for x in r] for r in matrix]
    n = len(m)
    if n == 0:
        return mpq(1)
    result = 1
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0 * m[0][0]
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        pv = m[c][c]
        result = result * pv
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / pv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return result


def inverse(matrix: Sequence[Sequence], field=RATIONAL) -> list[list]:
    n = len(matrix)
    m = [list(map(field, r)) + identity(n, field)[i] for i, r in enumerate(matrix)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [r[n:] for r in m]


def inertia(sym: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a rational symmetric matrix.

    Symmetric elimination with exact pivots; a zero diagonal with a nonzero
    off-diagonal entry is repaired by the congruence e_i -> e_i + e_j.
    """
    m = [[mpq(x) for x in r] for r in sym]
    n = len(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if m[k][k] != 0), None)
        if i is None:
            pair = next(((a, b) for a in active for b in active if a < b and m[a][b] != 0), None)
            if pair is None:
                break
            a, b = pair
            # row/col a += row/col b
            for k in range(n):
                m[a][k] += m[b][k]
            for k in range(n):
                m[k][a] += m[k][b]
            continue
        d = m[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for r in active:
            if m[r][i] != 0:
                f = m[r][i] / d
                for k in active:
                    m[r][k] -= f * m[i][k]
        for r in active:
            m[i][r] = m[r][i] = mpq(0)
    return pos, neg, n - pos - neg
