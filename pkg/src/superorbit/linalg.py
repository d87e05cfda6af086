"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of :class:`~fractions.Fraction`.  Everything here is
small-scale (desk-sized eigenproblems, structure-constant solves) so plain
Gauss-Jordan elimination is used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b)) if b else []
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = as_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of the right nullspace; one vector per free column."""
    if not a:
        n = ncols or 0
        return identity(n)
    r, pivots = rref(a)
    n = len(r[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def det(a: Sequence[Sequence]) -> Fraction:
    m = as_matrix(a)
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(as_matrix(a), identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` or None when the system is inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [Fraction(v)] for row, v in zip(as_matrix(a), b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = r[i][n]
    return x


def charpoly(a: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients of det(t I - a), highest degree first (Faddeev-LeVerrier)."""
    m = as_matrix(a)
    n = len(m)
    coeffs = [Fraction(1)]
    mk = identity(n)
    for k in range(1, n + 1):
        am = matmul(m, mk)
        ck = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(ck)
        mk = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots (with multiplicity) of a polynomial, highest degree first."""
    from math import gcd, lcm

    c = [Fraction(x) for x in coeffs]
    roots: list[Fraction] = []
    while c and c[-1] == 0:
        roots.append(Fraction(0))
        c.pop()
    if len(c) <= 1:
        return roots
    den = lcm(*(x.denominator for x in c))
    ints = [int(x * den) for x in c]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]

    def divisors(v: int) -> list[int]:
        v = abs(v)
        return [d for d in range(1, v + 1) if v % d == 0]

    cands = {Fraction(s * p, q) for p in divisors(ints[-1]) for q in divisors(ints[0]) for s in (1, -1)}
    poly = [Fraction(x) for x in ints]
    for r in sorted(cands):
        while len(poly) > 1:
            # synthetic division
            acc = [poly[0]]
            for x in poly[1:]:
                acc.append(x + acc[-1] * r)
            if acc[-1] != 0:
                break
            roots.append(r)
            poly = acc[:-1]
    return roots
