"""Lie superalgebras given by a homogeneous basis and structure constants.

Basis indices are 1-based throughout, matching the coordinate names
``x_1..x_d`` of the associated Poisson ring.  Even basis elements always come
before odd ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from . import linalg
from .errors import SignatureError
from .superring import EVEN, ODD, RingSignature, SuperPolynomial, poly_sum, to_scalar
from .supermatrix import SuperMatrix, super_commutator, supertrace, unit

SCALARS = RingSignature(0, 0)

Bracket = dict[tuple[int, int], dict[int, Fraction]]


def _sign(a: int, b: int) -> int:
    return -1 if a & b else 1


class LieSuperAlgebra:
    """Finite-dimensional Lie superalgebra ``[X_I, X_J] = c_IJ^K X_K``."""

    def __init__(self, parity: Sequence[int], brackets: Mapping[tuple[int, int], Mapping[int, Fraction]],
                 basis: Sequence[SuperMatrix] | None = None, name: str = "", shape: tuple[int, int] | None = None,
                 kind: str | None = None):
        self.parity = tuple(int(p) for p in parity)
        if any(p not in (0, 1) for p in self.parity):
            raise SignatureError("parities must be 0 or 1")
        if list(self.parity) != sorted(self.parity):
            raise SignatureError("even basis elements must precede odd ones")
        d = len(self.parity)
        self.brackets: Bracket = {}
        for (i, j), row in brackets.items():
            if not (1 <= i <= d and 1 <= j <= d):
                raise SignatureError(f"bracket index ({i},{j}) out of range")
            clean = {k: Fraction(v) for k, v in row.items() if v != 0}
            if any(not 1 <= k <= d for k in clean):
                raise SignatureError("structure constant target out of range")
            if clean:
                self.brackets[(i, j)] = clean
        self.basis = tuple(basis) if basis is not None else None
        self.name = name
        self.shape = shape
        self.kind = kind
        self._coord_solver = None

    @property
    def dim(self) -> int:
        return len(self.parity)

    @property
    def n_even(self) -> int:
        return self.parity.count(0)

    @property
    def n_odd(self) -> int:
        return self.parity.count(1)

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.brackets.get((i, j), {}).get(k, Fraction(0))

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        return dict(self.brackets.get((i, j), {}))

    def bracket_vectors(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Bilinear extension of the bracket to coordinate dicts (homogeneous scalar coefficients)."""
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.brackets.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v != 0}

    def with_constant(self, i: int, j: int, k: int, value) -> LieSuperAlgebra:
        """Copy with one structure constant overwritten (used for negative controls)."""
        br = {key: dict(row) for key, row in self.brackets.items()}
        br.setdefault((i, j), {})[k] = to_scalar(value)
        return LieSuperAlgebra(self.parity, br, self.basis, self.name + "*", self.shape, self.kind)

    # -- matrix realization -------------------------------------------------

    def coordinates(self, x: SuperMatrix) -> dict[int, Fraction]:
        """Coordinates of a scalar matrix in the basis; raises if outside the span."""
        if self.basis is None:
            raise ValueError("algebra has no matrix realization")
        if self._coord_solver is None:
            cols = [_flatten(b) for b in self.basis]
            a = [list(r) for r in zip(*cols)] if cols else []
            self._coord_solver = a
        target = _flatten(x)
        if not self.basis:
            if any(target):
                raise ValueError("matrix is not in the span of the basis")
            return {}
        sol = linalg.solve(self._coord_solver, target)
        if sol is None:
            raise ValueError("matrix is not in the span of the basis")
        return {k + 1: v for k, v in enumerate(sol) if v != 0}

    def element(self, coords: Mapping[int, Fraction]) -> SuperMatrix:
        if self.basis is None:
            raise ValueError("algebra has no matrix realization")
        m, n = self.shape
        size = m + n
        acc = [[Fraction(0)] * size for _ in range(size)]
        for k, v in coords.items():
            b = self.basis[k - 1].numeric()
            for i in range(size):
                for j in range(size):
                    acc[i][j] += v * b[i][j]
        return SuperMatrix(SCALARS, m, n, acc)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        entries = [
            {"i": i, "j": j, "k": k, "v": str(v)}
            for (i, j), row in sorted(self.brackets.items())
            for k, v in sorted(row.items())
        ]
        return {"dim": self.dim, "parity": list(self.parity), "c": entries}

    @classmethod
    def from_json(cls, data: Mapping) -> LieSuperAlgebra:
        if len(data["parity"]) != data["dim"]:
            raise SignatureError("parity vector length differs from dim")
        br: Bracket = {}
        for e in data["c"]:
            br.setdefault((int(e["i"]), int(e["j"])), {})[int(e["k"])] = to_scalar(e["v"])
        return cls(data["parity"], br, name=data.get("name", ""))

    def __repr__(self) -> str:
        return f"LieSuperAlgebra({self.name or 'anonymous'}, dim={self.dim}, parity={self.parity})"


def _flatten(x: SuperMatrix) -> list[Fraction]:
    return [v for row in x.numeric() for v in row]


def _from_matrices(basis: list[SuperMatrix], name: str, shape, kind) -> LieSuperAlgebra:
    parity = [b.parity for b in basis]
    alg = LieSuperAlgebra(parity, {}, basis, name, shape, kind)
    br: Bracket = {}
    for i, j in product(range(1, len(basis) + 1), repeat=2):
        comm = super_commutator(basis[i - 1], basis[j - 1])
        if not comm.is_zero():
            br[(i, j)] = alg.coordinates(comm)
    out = LieSuperAlgebra(parity, br, basis, name, shape, kind)
    out._coord_solver = alg._coord_solver
    return out


def _matrix_units(m: int, n: int):
    size = m + n
    even, odd = [], []
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            (even if (i <= m) == (j <= m) else odd).append((i, j))
    return even, odd


def build_gl(m: int, n: int) -> LieSuperAlgebra:
    """gl(m|n) on the matrix units, even units first, each group in row-major order."""
    if m < 0 or n < 0 or m + n < 1:
        raise SignatureError("gl(m|n) needs m + n >= 1")
    even, odd = _matrix_units(m, n)
    basis = [unit(SCALARS, m, n, i, j) for i, j in even + odd]
    return _from_matrices(basis, f"gl({m}|{n})", (m, n), "gl")


def build_sl(m: int, n: int) -> LieSuperAlgebra:
    """sl(m|n), m != n.

    Even part: ``H_i = E_ii - s_i s_{i+1} E_{i+1,i+1}`` (s = +1 on the even block,
    -1 on the odd block), then off-diagonal even units; odd units last.
    """
    if m == n:
        raise SignatureError("sl(m|n) with m == n is not supported (degenerate Killing form)")
    if m < 0 or n < 0 or m + n < 1:
        raise SignatureError("sl(m|n) needs m + n >= 1")
    size = m + n
    sgn = [1 if i < m else -1 for i in range(size)]
    cartan = []
    for i in range(size - 1):
        rows = [[Fraction(0)] * size for _ in range(size)]
        rows[i][i] = Fraction(1)
        rows[i + 1][i + 1] = Fraction(-sgn[i] * sgn[i + 1])
        cartan.append(SuperMatrix(SCALARS, m, n, rows, EVEN))
    even, odd = _matrix_units(m, n)
    basis = cartan + [unit(SCALARS, m, n, i, j) for i, j in even if i != j] + [unit(SCALARS, m, n, i, j) for i, j in odd]
    return _from_matrices(basis, f"sl({m}|{n})", (m, n), "sl")


def osp_form(m: int, n2: int) -> list[list[Fraction]]:
    """Gram matrix: identity on the even block, standard symplectic form on the odd block."""
    size = m + n2
    h = n2 // 2
    j = [[Fraction(0)] * size for _ in range(size)]
    for i in range(m):
        j[i][i] = Fraction(1)
    for a in range(h):
        j[m + a][m + h + a] = Fraction(1)
        j[m + h + a][m + a] = Fraction(-1)
    return j


def build_osp(m: int, n2: int) -> LieSuperAlgebra:
    """osp(m|n2): matrices X with ``(X^T J)_ab + (-1)^{p_X |a|} (J X)_ab = 0``.

    The basis is the rational nullspace of that linear system, taken separately
    for even and odd matrices.
    """
    if m < 1 or n2 < 1 or n2 % 2:
        raise SignatureError("osp(m|2n) needs m >= 1 and a positive even odd dimension")
    size = m + n2
    j = osp_form(m, n2)
    basis: list[SuperMatrix] = []
    for p in (EVEN, ODD):
        slots = [(a, b) for a in range(size) for b in range(size) if (p + _blk(a, m) + _blk(b, m)) % 2 == 0]
        eqs = []
        for a, b in product(range(size), repeat=2):
            sign = -1 if p and _blk(a, m) else 1
            row = [Fraction(0)] * len(slots)
            for s, (u, v) in enumerate(slots):
                # (X^T J)_ab = sum_c X_ca J_cb ; (J X)_ab = sum_c J_ac X_cb
                if v == a:
                    row[s] += j[u][b]
                if v == b:
                    row[s] += sign * j[a][u]
            if any(row):
                eqs.append(row)
        for vec in linalg.nullspace(eqs, len(slots)):
            rows = [[Fraction(0)] * size for _ in range(size)]
            for s, (u, v) in enumerate(slots):
                rows[u][v] = vec[s]
            basis.append(SuperMatrix(SCALARS, m, n2, rows, p))
    return _from_matrices(basis, f"osp({m}|{n2})", (m, n2), "osp")


def _blk(i: int, m: int) -> int:
    return 0 if i < m else 1


def build(kind: str, m: int, n: int) -> LieSuperAlgebra:
    if kind == "gl":
        return build_gl(m, n)
    if kind == "sl":
        return build_sl(m, n)
    if kind == "osp":
        return build_osp(m, n)
    raise ValueError(f"unknown algebra kind {kind!r}")


# -- axioms -----------------------------------------------------------------

@dataclass
class AxiomReport:
    violations: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v[0], "indices": list(v[1]), "detail": {str(k): str(x) for k, x in v[2].items()}}
                for v in self.violations
            ],
        }


def check_axioms(L: LieSuperAlgebra) -> AxiomReport:
    """Grading, graded antisymmetry and graded Jacobi on every basis pair/triple."""
    rep = AxiomReport()
    p = (None,) + L.parity
    d = L.dim
    for (i, j), row in sorted(L.brackets.items()):
        bad = {k: v for k, v in row.items() if p[k] != (p[i] + p[j]) % 2}
        if bad:
            rep.violations.append(("grading", (i, j), bad))
    for i in range(1, d + 1):
        for j in range(i, d + 1):
            a = L.bracket(i, j)
            b = L.bracket(j, i)
            s = _sign(p[i], p[j])
            diff = {k: a.get(k, 0) + s * b.get(k, 0) for k in set(a) | set(b)}
            diff = {k: v for k, v in diff.items() if v != 0}
            if diff:
                rep.violations.append(("antisymmetry", (i, j), diff))
    for i, j, k in product(range(1, d + 1), repeat=3):
        total: dict[int, Fraction] = {}
        terms = (
            (1, i, L.bracket(j, k)),
            (_sign(p[i], p[j]) * _sign(p[i], p[k]), j, L.bracket(k, i)),
            (_sign(p[i], p[k]) * _sign(p[j], p[k]), k, L.bracket(i, j)),
        )
        for s, a, inner in terms:
            for key, v in L.bracket_vectors({a: Fraction(s)}, inner).items():
                total[key] = total.get(key, 0) + v
        total = {key: v for key, v in total.items() if v != 0}
        if total:
            rep.violations.append(("jacobi", (i, j, k), total))
    return rep


# -- Killing form -------------------------------------------------------------

@dataclass
class KillingForm:
    matrix: list[list[Fraction]]
    parity: tuple[int, ...]
    even_det: Fraction
    odd_det: Fraction

    @property
    def nondegenerate(self) -> bool:
        return self.even_det != 0 and self.odd_det != 0

    def to_json(self) -> dict:
        return {
            "matrix": [[str(x) for x in row] for row in self.matrix],
            "evenDet": str(self.even_det),
            "oddDet": str(self.odd_det),
            "nondegenerate": self.nondegenerate,
        }


def adjoint_matrix(L: LieSuperAlgebra, i: int) -> list[list[Fraction]]:
    """Matrix of ad_{X_i}: column J holds the coordinates of [X_i, X_J]."""
    d = L.dim
    out = [[Fraction(0)] * d for _ in range(d)]
    for j in range(1, d + 1):
        for k, v in L.brackets.get((i, j), {}).items():
            out[k - 1][j - 1] = v
    return out


def killing_form(L: LieSuperAlgebra) -> KillingForm:
    d = L.dim
    sgn = [1 if p == 0 else -1 for p in L.parity]
    # sparse ad_i as {(row, col): value}; str(ad_i ad_j) = sum_{k,l} sgn_k ad_i[k,l] ad_j[l,k]
    ads = []
    for i in range(1, d + 1):
        ads.append({(k - 1, j - 1): v for j in range(1, d + 1) for k, v in L.brackets.get((i, j), {}).items()})
    b = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            aj = ads[j]
            total = Fraction(0)
            for (k, l), v in ads[i].items():
                w = aj.get((l, k))
                if w:
                    total += sgn[k] * v * w
            b[i][j] = total
    s = L.n_even
    even_blk = [row[:s] for row in b[:s]]
    odd_blk = [row[s:] for row in b[s:]]
    even_det = linalg.det(even_blk) if even_blk else Fraction(1)
    odd_det = linalg.det(odd_blk) if odd_blk else Fraction(1)
    return KillingForm(b, L.parity, even_det, odd_det)


def supertrace_form(L: LieSuperAlgebra) -> list[list[Fraction]]:
    """Gram matrix ``str(X_I X_J)`` of the defining representation."""
    if L.basis is None:
        raise ValueError("algebra has no matrix realization")
    d = L.dim
    g = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod_ = L.basis[i] @ L.basis[j]
            if prod_.parity == EVEN:
                g[i][j] = supertrace(prod_).constant_term()
    return g


def dual_basis(L: LieSuperAlgebra) -> list[SuperMatrix]:
    """Matrices ``X^I`` with ``str(X^I X_J) = delta_IJ``."""
    g = supertrace_form(L)
    try:
        ginv = linalg.inverse(g)
    except ZeroDivisionError:
        raise ValueError(f"supertrace form of {L.name} is degenerate") from None
    # X^I = sum_K a_IK X_K with sum_K a_IK g_KJ = delta_IJ, so a = g^{-1}
    return [L.element({k + 1: ginv[i][k] for k in range(L.dim) if ginv[i][k] != 0}) for i in range(L.dim)]


# -- Poisson structure on the coordinate ring -------------------------------

class PoissonRing:
    """Coordinate ring ``k[x_1..x_d]`` of the dual of a Lie superalgebra.

    Coordinate x_I of an even basis element is the even generator ``x<I>``; the
    coordinate of the odd basis element number ``s + a`` is the odd generator
    ``t<a>``.  With ``h_order`` set, an extra even generator ``h`` truncated at
    that power is appended (used to hold star products).
    """

    def __init__(self, algebra: LieSuperAlgebra, h_order: int | None = None):
        self.algebra = algebra
        s, r = algebra.n_even, algebra.n_odd
        self.h_order = h_order
        if h_order is None:
            self.ring = RingSignature(s, r)
        else:
            self.ring = RingSignature(
                s + 1, r, caps=(None,) * s + (h_order,),
                even_names=tuple(f"x{i}" for i in range(1, s + 1)) + ("h",),
            )

    def with_h(self, h_order: int) -> PoissonRing:
        return PoissonRing(self.algebra, h_order)

    def plain(self) -> PoissonRing:
        return PoissonRing(self.algebra)

    def coord(self, i: int) -> SuperPolynomial:
        s = self.algebra.n_even
        if not 1 <= i <= self.algebra.dim:
            raise SignatureError(f"coordinate index {i} out of range")
        return self.ring.even(i) if i <= s else self.ring.odd(i - s)

    def coord_name(self, i: int) -> str:
        s = self.algebra.n_even
        return self.ring.even_names[i - 1] if i <= s else self.ring.odd_names[i - s - 1]

    def h(self) -> SuperPolynomial:
        if self.h_order is None:
            raise ValueError("ring has no deformation parameter")
        return self.ring.even(self.algebra.n_even + 1)

    def split_key(self, key) -> tuple[tuple[int, ...], int]:
        """Monomial key -> (ascending basis-index word, h power)."""
        evens, mask = key
        s = self.algebra.n_even
        word: list[int] = []
        for i in range(s):
            word.extend([i + 1] * evens[i])
        hp = evens[s] if self.h_order is not None else 0
        i = 0
        while mask:
            if mask & 1:
                word.append(s + i + 1)
            mask >>= 1
            i += 1
        return tuple(word), hp

    def key_of(self, word: Sequence[int], hpow: int = 0):
        """Inverse of :meth:`split_key` for an ascending word (no repeated odd indices)."""
        s = self.algebra.n_even
        evens = [0] * self.ring.n_even
        mask = 0
        for i in word:
            if i <= s:
                evens[i - 1] += 1
            else:
                bit = 1 << (i - s - 1)
                if mask & bit:
                    return None
                mask |= bit
        if self.h_order is not None:
            evens[s] = hpow
        elif hpow:
            raise ValueError("ring has no deformation parameter")
        return tuple(evens), mask

    def generic_element(self, use_dual: bool = True) -> SuperMatrix:
        """``M = sum_I X^I x_I`` over the dual basis (or over the basis itself).

        Entries are written with the coefficient on the left, so an odd
        coordinate landing in an odd column picks up a sign.  With the dual basis
        the supertrace powers of M are Poisson central.
        """
        alg = self.algebra
        if alg.basis is None:
            raise ValueError("algebra has no matrix realization")
        mats = dual_basis(alg) if use_dual else list(alg.basis)
        m, n = alg.shape
        size = m + n
        ring = self.ring
        rows = [[ring.zero() for _ in range(size)] for _ in range(size)]
        for i, mat in enumerate(mats, 1):
            x = self.coord(i)
            odd = alg.parity[i - 1]
            num = mat.numeric()
            for a in range(size):
                for b in range(size):
                    if num[a][b]:
                        c = -num[a][b] if odd and b >= m else num[a][b]
                        rows[a][b] = rows[a][b] + x.scale(c)
        return SuperMatrix(ring, m, n, rows)

    def bracket_of_coords(self, i: int, j: int) -> SuperPolynomial:
        return poly_sum(self.ring, (self.coord(k).scale(v) for k, v in self.algebra.bracket(i, j).items()))


def poisson_bracket(f: SuperPolynomial, g: SuperPolynomial, P: PoissonRing) -> SuperPolynomial:
    """``{f, g} = sum_{I,J} (f d<-_I) {x_I, x_J} (d->_J g)`` with right/left graded derivatives."""
    if f.ring != P.ring or g.ring != P.ring:
        raise SignatureError("operands are not in the Poisson ring")
    d = P.algebra.dim
    right = {}
    left = {}
    for i in range(1, d + 1):
        fr = f.derivative(P.coord_name(i), "right")
        if fr:
            right[i] = fr
        gl_ = g.derivative(P.coord_name(i), "left")
        if gl_:
            left[i] = gl_
    terms = []
    for i, fr in right.items():
        for j, gl_ in left.items():
            br = P.bracket_of_coords(i, j)
            if br:
                terms.append(fr * br * gl_)
    return poly_sum(P.ring, terms)
