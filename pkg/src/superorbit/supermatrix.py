"""(m|n)-block matrices over a supercommutative ring.

A matrix is homogeneous of parity p when every entry at (I, J) has parity
``p + |I| + |J|``, where ``|I|`` is 0 for the first m rows/columns and 1 for the
last n.  Even matrices therefore have even diagonal blocks and odd off-diagonal
blocks; a scalar matrix unit in an off-diagonal block is odd.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import linalg
from .errors import NotInvertibleError, ParityError, SignatureError
from .superring import EVEN, ODD, RingSignature, SuperPolynomial, poly_sum, to_scalar

AUTO = "auto"


def _block(i: int, m: int) -> int:
    return 0 if i < m else 1


class SuperMatrix:
    """Immutable (m+n)x(m+n) matrix of SuperPolynomials with parity metadata.

    ``parity`` is 0 (even), 1 (odd) or None.  Passing ``"auto"`` infers it from the
    entries; an explicit parity is validated.
    """

    __slots__ = ("ring", "m", "n", "rows", "parity")

    def __init__(self, ring: RingSignature, m: int, n: int, rows: Sequence[Sequence], parity=AUTO):
        if m < 0 or n < 0 or m + n < 1:
            raise SignatureError("block shape needs m, n >= 0 and m + n >= 1")
        size = m + n
        if len(rows) != size or any(len(r) != size for r in rows):
            raise SignatureError(f"expected a {size}x{size} array of entries")
        conv = []
        for row in rows:
            out = []
            for x in row:
                if isinstance(x, SuperPolynomial):
                    if x.ring != ring:
                        raise SignatureError("entry belongs to a different ring")
                    out.append(x)
                else:
                    out.append(ring.const(to_scalar(x)))
            conv.append(tuple(out))
        self.ring, self.m, self.n = ring, m, n
        self.rows = tuple(conv)
        if parity == AUTO:
            parity = self._infer_parity()
        elif parity is not None:
            if not self._has_parity(parity):
                raise ParityError(f"entries do not match declared parity {parity}")
        self.parity = parity

    @property
    def size(self) -> int:
        return self.m + self.n

    def _has_parity(self, p: int) -> bool:
        m = self.m
        return all(
            x.is_homogeneous_of((p + _block(i, m) + _block(j, m)) & 1)
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
        )

    def _infer_parity(self):
        if self._has_parity(EVEN):
            return EVEN
        if self._has_parity(ODD):
            return ODD
        return None

    def __getitem__(self, ij: tuple[int, int]) -> SuperPolynomial:
        i, j = ij
        return self.rows[i][j]

    def blocks(self):
        """The four blocks (p, q, r, s) as lists of rows."""
        m = self.m
        p = [list(r[:m]) for r in self.rows[:m]]
        q = [list(r[m:]) for r in self.rows[:m]]
        r_ = [list(r[:m]) for r in self.rows[m:]]
        s = [list(r[m:]) for r in self.rows[m:]]
        return p, q, r_, s

    def map(self, fn: Callable[[SuperPolynomial], SuperPolynomial], parity=AUTO,
            ring: RingSignature | None = None) -> SuperMatrix:
        return SuperMatrix(ring or self.ring, self.m, self.n, [[fn(x) for x in row] for row in self.rows], parity)

    def _check(self, other: SuperMatrix) -> None:
        if (self.m, self.n) != (other.m, other.n) or self.ring != other.ring:
            raise SignatureError("shape or ring mismatch")

    def __add__(self, other: SuperMatrix) -> SuperMatrix:
        self._check(other)
        par = self.parity if self.parity == other.parity else AUTO
        return SuperMatrix(
            self.ring, self.m, self.n,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], par,
        )

    def __sub__(self, other: SuperMatrix) -> SuperMatrix:
        return self + (-other)

    def __neg__(self) -> SuperMatrix:
        return self.map(lambda x: -x, self.parity)

    def scale(self, c) -> SuperMatrix:
        """Multiply by an even scalar (rational or even ring element) from the left."""
        if isinstance(c, SuperPolynomial):
            return self.map(lambda x: c * x)
        c = to_scalar(c)
        return self.map(lambda x: x.scale(c), self.parity)

    def __matmul__(self, other: SuperMatrix) -> SuperMatrix:
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.ring, self.m, self.n, self.rows) == (other.ring, other.m, other.n, other.rows)

    def __hash__(self) -> int:
        return hash((self.ring, self.m, self.n, self.rows))

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self.rows) for j, x in enumerate(row) if i != j)

    def diagonal(self) -> list[SuperPolynomial]:
        return [self.rows[i][i] for i in range(self.size)]

    def body(self) -> SuperMatrix:
        return self.map(lambda x: x.body(), self.parity)

    def odd_component(self, k: int) -> SuperMatrix:
        return self.map(lambda x: x.odd_component(k))

    def term_count(self) -> int:
        return sum(len(x) for row in self.rows for x in row)

    def numeric(self) -> list[list[Fraction]]:
        """Entries as rationals; raises if any entry is not constant."""
        if not all(x.is_constant() for row in self.rows for x in row):
            raise ValueError("matrix has non-constant entries")
        return [[x.constant_term() for x in row] for row in self.rows]

    def change_ring(self, ring: RingSignature) -> SuperMatrix:
        """Re-embed a matrix with constant entries into another ring."""
        return SuperMatrix(ring, self.m, self.n, self.numeric(), self.parity)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows) + "]"

    def __repr__(self) -> str:
        return f"SuperMatrix({self.m}|{self.n}, {self})"


def identity(ring: RingSignature, m: int, n: int) -> SuperMatrix:
    size = m + n
    return SuperMatrix(ring, m, n, [[int(i == j) for j in range(size)] for i in range(size)], EVEN)


def zeros(ring: RingSignature, m: int, n: int) -> SuperMatrix:
    size = m + n
    return SuperMatrix(ring, m, n, [[0] * size for _ in range(size)], EVEN)


def diag(ring: RingSignature, m: int, n: int, values: Sequence) -> SuperMatrix:
    size = m + n
    vals = list(values)
    return SuperMatrix(ring, m, n, [[vals[i] if i == j else 0 for j in range(size)] for i in range(size)])


def unit(ring: RingSignature, m: int, n: int, i: int, j: int) -> SuperMatrix:
    """Matrix unit E_ij (1-based indices)."""
    size = m + n
    return SuperMatrix(ring, m, n, [[int((a, b) == (i - 1, j - 1)) for b in range(size)] for a in range(size)])


def _product_parity(a, b):
    if a is None or b is None:
        return AUTO
    return (a + b) & 1


def mat_mul(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    a._check(b)
    size = a.size
    ring = a.ring
    cols = [[b.rows[k][j] for k in range(size)] for j in range(size)]
    rows = []
    for i in range(size):
        arow = a.rows[i]
        rows.append([poly_sum(ring, (x * y for x, y in zip(arow, col) if x and y)) for col in cols])
    return SuperMatrix(ring, a.m, a.n, rows, _product_parity(a.parity, b.parity))


def supertrace(a: SuperMatrix) -> SuperPolynomial:
    if a.parity != EVEN:
        raise ParityError("supertrace is only defined here for even supermatrices")
    out = a.ring.zero()
    for i in range(a.size):
        out = out + a.rows[i][i] if i < a.m else out - a.rows[i][i]
    return out


def det_even(entries: Sequence[Sequence[SuperPolynomial]]) -> SuperPolynomial:
    """Determinant of a square matrix of even (hence commuting) ring elements."""
    size = len(entries)
    if size == 0:
        raise SignatureError("empty matrix")
    ring = entries[0][0].ring
    for row in entries:
        for x in row:
            if not x.is_homogeneous_of(EVEN):
                raise ParityError("det_even needs even entries")

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> SuperPolynomial:
        if row == size:
            return ring.one()
        out = ring.zero()
        sign = 1
        for c in sorted(cols):
            x = entries[row][c]
            if x:
                sub = minor(row + 1, cols - {c})
                if sub:
                    out = out + (x * sub if sign > 0 else -(x * sub))
            sign = -sign
        return out

    return minor(0, frozenset(range(size)))


def _invert_square(entries: Sequence[Sequence[SuperPolynomial]]) -> list[list[SuperPolynomial]]:
    """Inverse of a square matrix whose entries are constant plus nilpotent."""
    size = len(entries)
    ring = entries[0][0].ring
    const = []
    nil = []
    for row in entries:
        crow, nrow = [], []
        for x in row:
            c = x.constant_term()
            rest = x - c
            if any(not rest.is_nilpotent_term(k) for k, _ in rest.items()):
                raise NotInvertibleError("body is not numeric; cannot invert over the even subring")
            crow.append(c)
            nrow.append(rest)
        const.append(crow)
        nil.append(nrow)
    try:
        cinv = linalg.inverse(const)
    except ZeroDivisionError:
        raise NotInvertibleError("body block is singular") from None
    cinv_p = [[ring.const(v) for v in row] for row in cinv]

    def mul(a, b):
        return [[poly_sum(ring, (a[i][k] * b[k][j] for k in range(size) if a[i][k] and b[k][j]))
                 for j in range(size)] for i in range(size)]

    # (C + N)^-1 = sum_k (-C^-1 N)^k C^-1, terminating because N is nilpotent
    step = [[-x for x in row] for row in mul(cinv_p, nil)]
    total = [[ring.const(int(i == j)) for j in range(size)] for i in range(size)]
    power = total
    while True:
        power = mul(power, step)
        if all(not x for row in power for x in row):
            break
        total = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(total, power)]
    return mul(total, cinv_p)


def mat_inverse(a: SuperMatrix) -> SuperMatrix:
    if a.parity != EVEN:
        raise ParityError("inverse requires an even supermatrix")
    # off-diagonal blocks are odd, so the constant part is block diagonal
    inv = _invert_square(a.rows)
    return SuperMatrix(a.ring, a.m, a.n, inv, EVEN)


def berezinian(a: SuperMatrix) -> SuperPolynomial:
    """Ber(A) = det(p - q s^-1 r) / det(s)."""
    if a.parity != EVEN:
        raise ParityError("Berezinian requires an even supermatrix")
    p, q, r, s = a.blocks()
    ring = a.ring
    if a.n == 0:
        return det_even(p)
    s_inv = _invert_square(s)
    det_s_inv = det_even(s).invert()
    if a.m == 0:
        return det_s_inv
    m, n = a.m, a.n
    # q s^-1 r keeps the factor order: q (odd) * s^-1 (even) * r (odd)
    qs = [[poly_sum(ring, (q[i][k] * s_inv[k][j] for k in range(n))) for j in range(n)] for i in range(m)]
    schur = [[p[i][j] - poly_sum(ring, (qs[i][k] * r[k][j] for k in range(n))) for j in range(m)] for i in range(m)]
    return det_even(schur) * det_s_inv


def power_sums(a: SuperMatrix, kmax: int, even_only: bool = False) -> list[SuperPolynomial]:
    if a.parity != EVEN:
        raise ParityError("power sums are taken of even supermatrices")
    out = []
    power = a
    for k in range(1, (2 * kmax if even_only else kmax) + 1):
        if k > 1:
            power = power @ a
        if not even_only or k % 2 == 0:
            out.append(supertrace(power))
    return out


def super_commutator(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    """XY - (-1)^{p_X p_Y} YX."""
    if x.parity is None or y.parity is None:
        raise ParityError("super commutator needs homogeneous operands")
    xy = x @ y
    yx = y @ x
    if x.parity and y.parity:
        out = xy + yx
    else:
        out = xy - yx
    return SuperMatrix(out.ring, out.m, out.n, out.rows, (x.parity + y.parity) & 1)


def to_json(a: SuperMatrix) -> dict:
    return {"m": a.m, "n": a.n, "entries": [[str(x) for x in row] for row in a.rows]}
