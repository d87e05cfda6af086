"""Seeded random generators for ring elements and supermatrices."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .orbit import random_numeric_invertible
from .superring import EVEN, RingSignature, SuperPolynomial
from .supermatrix import SuperMatrix


def random_scalar(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_poly(ring: RingSignature, rng: random.Random, parity: int | None = None, max_even_deg: int = 2,
                terms: int = 4, constant: bool = True) -> SuperPolynomial:
    """A sparse random element; ``parity`` restricts to one homogeneous part."""
    out = ring.zero()
    odd_sets = [c for k in range(ring.n_odd + 1) for c in combinations(range(1, ring.n_odd + 1), k)]
    if parity is not None:
        odd_sets = [c for c in odd_sets if len(c) % 2 == parity]
    for _ in range(terms):
        odd = rng.choice(odd_sets)
        evens = [0] * ring.n_even
        for _ in range(rng.randint(0, max_even_deg)):
            if ring.n_even:
                evens[rng.randrange(ring.n_even)] += 1
        if not constant and not odd and not any(evens):
            continue
        out = out + ring.monomial(evens, odd, random_scalar(rng))
    return out


def random_nilpotent(ring: RingSignature, rng: random.Random, parity: int, terms: int = 3) -> SuperPolynomial:
    """Random element of the given parity with no constant or purely even part."""
    out = ring.zero()
    odd_sets = [c for k in range(1, ring.n_odd + 1) for c in combinations(range(1, ring.n_odd + 1), k)
                if k % 2 == parity]
    if not odd_sets:
        return out
    for _ in range(terms):
        out = out + ring.monomial([0] * ring.n_even, rng.choice(odd_sets), random_scalar(rng))
    return out


def random_even_matrix(ring: RingSignature, m: int, n: int, rng: random.Random, **kw) -> SuperMatrix:
    size = m + n
    rows = [[random_poly(ring, rng, (int(a >= m) + int(b >= m)) % 2, **kw) for b in range(size)] for a in range(size)]
    return SuperMatrix(ring, m, n, rows, EVEN)


def random_invertible(ring: RingSignature, m: int, n: int, rng: random.Random, terms: int = 3) -> SuperMatrix:
    """Numeric invertible block-diagonal body plus a random nilpotent even perturbation."""
    body = random_numeric_invertible(m, n, rng)
    size = m + n
    rows = []
    for a in range(size):
        row = []
        for b in range(size):
            par = (int(a >= m) + int(b >= m)) % 2
            row.append(ring.const(body[a][b]) + random_nilpotent(ring, rng, par, terms))
        rows.append(row)
    return SuperMatrix(ring, m, n, rows, EVEN)
