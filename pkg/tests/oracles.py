"""Independent reference computations used by the tests.

Nothing here imports the engine's arithmetic: Grassmann products are done by
bubble-sorting odd index lists, even parts are sympy expressions, and ranks come
from sympy's exact domain matrices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def bubble_sign(indices):
    """Sign and sorted tuple of a product of anticommuting generators, or (0, None)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class Grassmann:
    """Element of k[x_1..x_M] tensor Lambda[t_1..t_N] as {odd tuple: sympy expression}."""

    def __init__(self, M, N, parts=None):
        self.M, self.N = M, N
        self.xs = sp.symbols(f"x1:{M + 1}") if M else ()
        self.parts = {k: sp.expand(v) for k, v in (parts or {}).items() if sp.expand(v) != 0}

    @classmethod
    def from_engine(cls, poly):
        ring = poly.ring
        out = cls(ring.n_even, ring.n_odd)
        for (evens, odd), c in poly.terms().items():
            mono = sp.Rational(c.numerator, c.denominator)
            for x, e in zip(out.xs, evens):
                mono *= x ** e
            out.parts[odd] = sp.expand(out.parts.get(odd, 0) + mono)
        out.parts = {k: v for k, v in out.parts.items() if v != 0}
        return out

    def odd(self, i):
        return Grassmann(self.M, self.N, {(i,): 1})

    def const(self, c):
        return Grassmann(self.M, self.N, {(): c})

    def __add__(self, other):
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out.get(k, 0) + v
        return Grassmann(self.M, self.N, out)

    def __neg__(self):
        return Grassmann(self.M, self.N, {k: -v for k, v in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Grassmann):
            return Grassmann(self.M, self.N, {k: v * other for k, v in self.parts.items()})
        out = {}
        for ka, va in self.parts.items():
            for kb, vb in other.parts.items():
                sign, key = bubble_sign(ka + kb)
                if sign:
                    out[key] = out.get(key, 0) + sign * va * vb
        return Grassmann(self.M, self.N, out)

    def __eq__(self, other):
        return self.parts == other.parts

    def body_constant(self):
        return sp.Rational(self.parts.get((), 0))


def grassmann_inverse(a):
    """Inverse of constant + nilpotent by the geometric series."""
    c = a.body_constant()
    eta = (a - a.const(c)) * (1 / c)
    total = a.const(1)
    term = a.const(1)
    for _ in range(a.N + 1):
        term = term * (-eta)
        total = total + term
    return total * (1 / c)


def ber_1x1(p, q, r, s):
    """Berezinian of a 1|1 matrix by the textbook formula."""
    si = grassmann_inverse(s)
    return (p - q * si * r) * si


# -- polynomial space dimensions ----------------------------------------------

def count_monomials(n_even, n_odd, d):
    """dim of the polynomials of degree at most d in n_even even and n_odd odd variables."""
    total = 0
    for k in range(0, min(n_odd, d) + 1):
        odd_choices = len(list(combinations(range(n_odd), k)))
        even_count = sum(len(list(combinations_with_replacement(range(n_even), j))) for j in range(d - k + 1))
        total += odd_choices * even_count
    return total


def _monomial_list(n_even, n_odd, D):
    out = []
    for k in range(0, min(n_odd, D) + 1):
        for odd in combinations(range(1, n_odd + 1), k):
            for j in range(D - k + 1):
                for ev in combinations_with_replacement(range(n_even), j):
                    evens = [0] * n_even
                    for i in ev:
                        evens[i] += 1
                    out.append((tuple(evens), odd))
    return out


def _oracle_poly(poly):
    """Engine polynomial -> {(evens, odd tuple): sympy Rational} via its public term view."""
    return {k: sp.Rational(c.numerator, c.denominator) for k, c in poly.terms().items()}


def _times_monomial(mono, poly_terms):
    evens_m, odd_m = mono
    out = {}
    for (evens, odd), c in poly_terms.items():
        sign, key = bubble_sign(odd_m + odd)
        if not sign:
            continue
        ev = tuple(a + b for a, b in zip(evens_m, evens))
        out[(ev, key)] = out.get((ev, key), 0) + sign * c
    return {k: v for k, v in out.items() if v != 0}


def _degree(key):
    return sum(key[0]) + len(key[1])


def ideal_span_rows(shadows, n_even, n_odd, D):
    """Coefficient rows of m * q over all monomials m with deg(m q) <= D."""
    monos = _monomial_list(n_even, n_odd, D)
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for q in shadows:
        qt = _oracle_poly(q)
        dq = max(_degree(k) for k in qt)
        for m in monos:
            if _degree(m) + dq > D:
                continue
            prod = _times_monomial(m, qt)
            row = [0] * len(monos)
            for k, v in prod.items():
                row[col[k]] = v
            rows.append(row)
    return monos, rows


def _rank(rows, ncols):
    if not rows:
        return 0
    sparse = {}
    for i, row in enumerate(rows):
        entries = {j: QQ(int(sp.Rational(v).p), int(sp.Rational(v).q)) for j, v in enumerate(row) if v != 0}
        if entries:
            sparse[i] = entries
    return DomainMatrix(sparse, (len(rows), ncols), QQ).rank()


def filtration_dims(shadows, n_even, n_odd, d, D):
    """dim V_k / (W cap V_k) for k <= d, with W the span of m*q inside V_D.

    Columns are ordered by descending degree, so in the reduced row echelon form
    of W the rows whose pivot sits in a degree <= k column span W cap V_k.
    """
    monos, rows = ideal_span_rows(shadows, n_even, n_odd, D)
    perm = sorted(range(len(monos)), key=lambda i: -_degree(monos[i]))
    sparse = {}
    for i, row in enumerate(rows):
        entries = {c: QQ(int(sp.Rational(row[j]).p), int(sp.Rational(row[j]).q)) for c, j in enumerate(perm) if row[j] != 0}
        if entries:
            sparse[i] = entries
    _, pivots = DomainMatrix(sparse, (len(rows), len(monos)), QQ).rref(method="GJ")
    pivot_degrees = [_degree(monos[perm[c]]) for c in pivots]
    dims = []
    for k in range(d + 1):
        inside = sum(1 for g in pivot_degrees if g <= k)
        total = sum(1 for m in monos if _degree(m) <= k)
        dims.append(total - inside)
    return dims


def spans_modulo(shadows, n_even, n_odd, D, targets, basis):
    """Whether each target polynomial lies in span(ideal rows) + span(basis monomials), and
    whether the basis monomials stay independent modulo the ideal rows."""
    monos, rows = ideal_span_rows(shadows, n_even, n_odd, D)
    col = {m: i for i, m in enumerate(monos)}

    def vec(terms):
        v = [0] * len(monos)
        for k, c in terms.items():
            v[col[k]] = c
        return v

    basis_rows = [vec({b: 1}) for b in basis]
    n = len(monos)
    r = _rank(rows + basis_rows, n)
    independent = r == _rank(rows, n) + len(basis)
    contained = [_rank(rows + basis_rows + [vec(_oracle_poly(t))], n) == r for t in targets]
    return independent, contained


def reduce_to_basis(shadows, n_even, n_odd, D, target, basis):
    """Coefficients c_b with target - sum c_b b in the ideal span, by solving a sympy system."""
    monos, rows = ideal_span_rows(shadows, n_even, n_odd, D)
    col = {m: i for i, m in enumerate(monos)}
    A = sp.Matrix(rows).T
    Bm = sp.zeros(len(monos), len(basis))
    for j, b in enumerate(basis):
        Bm[col[b], j] = 1
    rhs = sp.zeros(len(monos), 1)
    for k, c in _oracle_poly(target).items():
        rhs[col[k], 0] = c
    system = A.row_join(Bm)
    sol, params = system.gauss_jordan_solve(rhs)
    sol = sol.subs({p: 0 for p in params})
    tail = sol[A.shape[1]:, 0]
    return {b: Fraction(int(sp.fraction(v)[0]), int(sp.fraction(v)[1])) for b, v in zip(basis, tail) if v != 0}
