"""Deformation quantization of coadjoint orbits.

``U_h`` is the enveloping algebra of the Lie superalgebra with bracket scaled by
``h``; elements are kept in PBW normal form (nondecreasing basis words, no
repeated odd letter) with coefficients truncated above ``h^H``.  The
supersymmetrizer ``tau`` identifies the coordinate ring of the dual with
``U_h`` and transports the product of ``U_h`` to a star product.  The quotient
by the ideal generated by central elements ``P_i - c_i(h)`` is handled by
graded linear algebra on the classical side and h-order peeling on the quantum
side.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegreeOverflowError, ParityError, SignatureError
from .liesuper import LieSuperAlgebra, PoissonRing, poisson_bracket
from .superring import ScalarLike, SuperPolynomial, mask_indices, to_scalar

MAX_TAU_DEGREE = 6

Word = tuple[int, ...]
TermKey = tuple[Word, int]


class HScalar:
    """Truncated power series ``a_0 + a_1 h + ... + a_H h^H`` with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[ScalarLike], order: int):
        cs = [to_scalar(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, value: ScalarLike, order: int) -> HScalar:
        return cls([value], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, other: HScalar) -> None:
        if other.order != self.order:
            raise SignatureError("truncation orders differ")

    def __add__(self, other: HScalar) -> HScalar:
        self._check(other)
        return HScalar([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other: HScalar) -> HScalar:
        self._check(other)
        return HScalar([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self) -> HScalar:
        return HScalar([-a for a in self.coeffs], self.order)

    def __mul__(self, other) -> HScalar:
        if not isinstance(other, HScalar):
            c = to_scalar(other)
            return HScalar([a * c for a in self.coeffs], self.order)
        self._check(other)
        H = self.order
        out = [Fraction(0)] * (H + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(H + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return HScalar(out, H)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def invert(self) -> HScalar:
        if not self.is_unit():
            raise ZeroDivisionError("series with zero constant term is not a unit")
        H = self.order
        a0 = self.coeffs[0]
        out = [1 / a0]
        for k in range(1, H + 1):
            out.append(-sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0)) / a0)
        return HScalar(out, H)

    def __eq__(self, other) -> bool:
        if isinstance(other, HScalar):
            return self.coeffs == other.coeffs
        return self.coeffs == HScalar.const(other, self.order).coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self) -> str:
        parts = [f"{c}*h^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"


class Envelope:
    """PBW rewriting engine for ``U_h`` of ``algebra`` truncated above ``h^order``."""

    STRATEGIES = ("left", "right")

    def __init__(self, algebra: LieSuperAlgebra, order: int = 3):
        if order < 1:
            raise ValueError("h truncation order must be at least 1")
        self.algebra = algebra
        self.H = order
        self.poisson = PoissonRing(algebra)
        self.poisson_h = PoissonRing(algebra, order)
        self._nf_cache: dict[tuple[Word, int, str], dict[TermKey, Fraction]] = {}
        self._tau_cache: dict[Word, dict[TermKey, Fraction]] = {}

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def is_odd(self, i: int) -> bool:
        return bool(self.algebra.parity[i - 1])

    def is_normal(self, word: Sequence[int]) -> bool:
        return all(a < b or (a == b and not self.is_odd(a)) for a, b in zip(word, word[1:]))

    # -- constructors ---------------------------------------------------------

    def element(self, terms: Mapping[TermKey, ScalarLike]) -> EnvElement:
        return EnvElement(self, terms)

    def zero(self) -> EnvElement:
        return EnvElement(self, {})

    def unit(self) -> EnvElement:
        return EnvElement(self, {((), 0): Fraction(1)})

    def const(self, c: ScalarLike | HScalar) -> EnvElement:
        if isinstance(c, HScalar):
            return EnvElement(self, {((), k): v for k, v in enumerate(c.coeffs[: self.H + 1])})
        return EnvElement(self, {((), 0): to_scalar(c)})

    def gen(self, i: int) -> EnvElement:
        if not 1 <= i <= self.dim:
            raise SignatureError(f"basis index {i} out of range")
        return EnvElement(self, {((i,), 0): Fraction(1)})

    def h(self) -> EnvElement:
        return EnvElement(self, {((), 1): Fraction(1)})

    def word(self, word: Sequence[int], coeff: ScalarLike | HScalar = 1, strategy: str = "left") -> EnvElement:
        return normal_form(self, word, coeff, strategy)

    # -- rewriting ------------------------------------------------------------

    def _nf(self, word: Word, budget: int, strategy: str) -> dict[TermKey, Fraction]:
        """Normal form of the bare word, keeping h-powers up to ``budget``."""
        key = (word, budget, strategy)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        spots = [i for i in range(len(word) - 1)
                 if word[i] > word[i + 1] or (word[i] == word[i + 1] and self.is_odd(word[i]))]
        if not spots:
            out = {(word, 0): Fraction(1)}
            self._nf_cache[key] = out
            return out
        i = spots[0] if strategy == "left" else spots[-1]
        J, I = word[i], word[i + 1]
        pre, post = word[:i], word[i + 2:]
        out: dict[TermKey, Fraction] = {}

        def add(src: Mapping[TermKey, Fraction], c: Fraction, shift: int) -> None:
            for (w, hp), v in src.items():
                k = (w, hp + shift)
                nv = out.get(k, 0) + c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)

        if J == I:
            # odd letter squared: X X = (h/2)[X, X]
            if budget:
                for k, v in self.algebra.bracket(J, J).items():
                    add(self._nf(pre + (k,) + post, budget - 1, strategy), v / 2, 1)
        else:
            sign = -1 if self.is_odd(I) and self.is_odd(J) else 1
            add(self._nf(pre + (I, J) + post, budget, strategy), Fraction(sign), 0)
            if budget:
                for k, v in self.algebra.bracket(J, I).items():
                    add(self._nf(pre + (k,) + post, budget - 1, strategy), v, 1)
        self._nf_cache[key] = out
        return out

    def mul(self, a: EnvElement, b: EnvElement) -> EnvElement:
        if a.env is not self or b.env is not self:
            raise SignatureError("elements belong to different enveloping algebras")
        H = self.H
        out: dict[TermKey, Fraction] = {}
        for (wa, ha), ca in a.terms.items():
            for (wb, hb), cb in b.terms.items():
                base = ha + hb
                if base > H:
                    continue
                c = ca * cb
                for (w, hp), v in self._nf(wa + wb, H - base, "left").items():
                    k = (w, hp + base)
                    nv = out.get(k, 0) + c * v
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return EnvElement(self, out, canonical=True)

    # -- symmetrizer ----------------------------------------------------------

    def tau_word(self, word: Word) -> dict[TermKey, Fraction]:
        """``tau`` of the ascending coordinate monomial labelled by ``word``."""
        hit = self._tau_cache.get(word)
        if hit is not None:
            return hit
        p = len(word)
        if p > MAX_TAU_DEGREE:
            raise DegreeOverflowError(f"symmetrizer is capped at degree {MAX_TAU_DEGREE}, got {p}")
        arrangements = set(permutations(range(p)))
        seen: dict[Word, int] = {}
        for perm in arrangements:
            arr = tuple(word[i] for i in perm)
            if arr in seen:
                continue
            odd_pos = [i for i in perm if self.is_odd(word[i])]
            inv = sum(1 for x, y in combinations(odd_pos, 2) if x > y)
            seen[arr] = -1 if inv % 2 else 1
        weight = Fraction(1, len(seen))
        out: dict[TermKey, Fraction] = {}
        for arr, sign in seen.items():
            for k, v in self._nf(arr, self.H, "left").items():
                nv = out.get(k, 0) + weight * sign * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        self._tau_cache[word] = out
        return out

    def split(self, f: SuperPolynomial) -> Iterator[tuple[Word, int, Fraction]]:
        """Terms of a coordinate polynomial as (ascending word, h power, coefficient)."""
        if f.ring == self.poisson.ring:
            P = self.poisson
        elif f.ring == self.poisson_h.ring:
            P = self.poisson_h
        else:
            raise SignatureError("polynomial is not in the coordinate ring of this algebra")
        for key, c in f.items():
            w, hp = P.split_key(key)
            yield w, hp, c

    def from_words(self, terms: Mapping[TermKey, ScalarLike]) -> SuperPolynomial:
        """Coordinate polynomial ``sum c h^k x_word`` in the h-ring."""
        P = self.poisson_h
        out = {}
        for (w, hp), c in terms.items():
            if hp > self.H or not c:
                continue
            key = P.key_of(tuple(sorted(w)), hp)
            if key is None:
                continue
            sign = _sort_sign(w, self)
            out[key] = out.get(key, 0) + sign * to_scalar(c)
        return SuperPolynomial(P.ring, {k: v for k, v in out.items() if v})

    def to_h_ring(self, f: SuperPolynomial) -> SuperPolynomial:
        return self.from_words({(w, hp): c for w, hp, c in self.split(f)})


def _sort_sign(word: Sequence[int], env: Envelope) -> int:
    odd = [i for i in word if env.is_odd(i)]
    inv = sum(1 for a, b in combinations(odd, 2) if a > b)
    return -1 if inv % 2 else 1


class EnvElement:
    """Element of ``U_h``: normal words with truncated h-series coefficients.

    Stored flat as ``{(word, h power): coefficient}``.
    """

    __slots__ = ("env", "terms")

    def __init__(self, env: Envelope, terms: Mapping[TermKey, ScalarLike], canonical: bool = False):
        self.env = env
        if canonical:
            self.terms = dict(terms)
            return
        clean: dict[TermKey, Fraction] = {}
        for (w, hp), c in terms.items():
            w = tuple(w)
            if hp > env.H:
                continue
            if not env.is_normal(w):
                raise ValueError(f"word {w} is not in normal form")
            c = to_scalar(c)
            if c:
                clean[(w, hp)] = clean.get((w, hp), 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    # -- arithmetic -----------------------------------------------------------

    def _same(self, other: EnvElement) -> None:
        if not isinstance(other, EnvElement) or other.env is not self.env:
            raise SignatureError("elements belong to different enveloping algebras")

    def __add__(self, other: EnvElement) -> EnvElement:
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return EnvElement(self.env, out, canonical=True)

    def __neg__(self) -> EnvElement:
        return EnvElement(self.env, {k: -v for k, v in self.terms.items()}, canonical=True)

    def __sub__(self, other: EnvElement) -> EnvElement:
        return self + (-other)

    def scale(self, c: ScalarLike | HScalar) -> EnvElement:
        if isinstance(c, HScalar):
            return self.env.const(c) * self
        c = to_scalar(c)
        if not c:
            return self.env.zero()
        return EnvElement(self.env, {k: c * v for k, v in self.terms.items()}, canonical=True)

    def shift(self, k: int) -> EnvElement:
        """Multiply by ``h^k``."""
        H = self.env.H
        return EnvElement(self.env, {(w, hp + k): v for (w, hp), v in self.terms.items() if hp + k <= H},
                          canonical=True)

    def __mul__(self, other) -> EnvElement:
        if isinstance(other, EnvElement):
            return self.env.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> EnvElement:
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, EnvElement) and other.env is self.env and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def words(self) -> list[Word]:
        return sorted({w for w, _ in self.terms}, key=lambda w: (len(w), w))

    def coefficient(self, word: Sequence[int]) -> HScalar:
        word = tuple(word)
        return HScalar([self.terms.get((word, k), 0) for k in range(self.env.H + 1)], self.env.H)

    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    def h_part(self, k: int) -> EnvElement:
        """The h-free element multiplying ``h^k``."""
        return EnvElement(self.env, {(w, 0): v for (w, hp), v in self.terms.items() if hp == k}, canonical=True)

    def truncate(self, k: int) -> EnvElement:
        """Reduce modulo ``h^k``."""
        return EnvElement(self.env, {key: v for key, v in self.terms.items() if key[1] < k}, canonical=True)

    def parity(self) -> int | None:
        ps = {sum(self.env.is_odd(i) for i in w) % 2 for w, _ in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def to_json(self) -> list[dict]:
        return [{"word": list(w), "coeff": self.coefficient(w).to_json()} for w in self.words()]

    @classmethod
    def from_json(cls, env: Envelope, data: Sequence[Mapping]) -> EnvElement:
        terms: dict[TermKey, Fraction] = {}
        for item in data:
            w = tuple(int(i) for i in item["word"])
            for k, c in enumerate(item["coeff"]):
                terms[(w, k)] = terms.get((w, k), 0) + to_scalar(c)
        return cls(env, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for w in self.words():
            coeff = self.coefficient(w)
            mono = "*".join(f"X{i}" for i in w) or "1"
            chunks.append(f"({coeff})*{mono}")
        return " + ".join(chunks)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# operations


def normal_form(env: Envelope, word: Sequence[int], coeff: ScalarLike | HScalar = 1,
                strategy: str = "left") -> EnvElement:
    """Rewrite ``coeff * X_{w1} ... X_{wk}`` into PBW normal form."""
    if strategy not in Envelope.STRATEGIES:
        raise ValueError(f"unknown rewrite strategy {strategy!r}")
    word = tuple(int(i) for i in word)
    if any(not 1 <= i <= env.dim for i in word):
        raise SignatureError("basis index out of range")
    series = coeff if isinstance(coeff, HScalar) else HScalar.const(coeff, env.H)
    H = env.H
    out: dict[TermKey, Fraction] = {}
    for base, c in enumerate(series.coeffs):
        if not c:
            continue
        for (w, hp), v in env._nf(word, H - base, strategy).items():
            k = (w, hp + base)
            nv = out.get(k, 0) + c * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return EnvElement(env, out, canonical=True)


def env_mul(a: EnvElement, b: EnvElement) -> EnvElement:
    return a.env.mul(a, b)


def symmetrize(env: Envelope, f: SuperPolynomial) -> EnvElement:
    """``tau``: signed average over orderings of each monomial, then normal form."""
    H = env.H
    out: dict[TermKey, Fraction] = {}
    for w, hp, c in env.split(f):
        if hp > H:
            continue
        for (nw, k), v in env.tau_word(w).items():
            if k + hp > H:
                continue
            key = (nw, k + hp)
            nv = out.get(key, 0) + c * v
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return EnvElement(env, out, canonical=True)


def unsymmetrize(env: Envelope, a: EnvElement) -> SuperPolynomial:
    """Inverse of ``tau``, returned in the coordinate ring extended by ``h``.

    ``tau(x_w)`` is the word ``w`` plus terms that are shorter and carry more
    powers of ``h``, so peeling off the longest words first terminates.
    """
    if a.env is not env:
        raise SignatureError("element belongs to a different enveloping algebra")
    rest = dict(a.terms)
    found: dict[TermKey, Fraction] = {}
    H = env.H
    while rest:
        (w, hp) = max(rest, key=lambda k: (len(k[0]), -k[1], k[0]))
        c = rest[(w, hp)]
        found[(w, hp)] = found.get((w, hp), 0) + c
        for (nw, k), v in env.tau_word(w).items():
            if k + hp > H:
                continue
            key = (nw, k + hp)
            nv = rest.get(key, 0) - c * v
            if nv:
                rest[key] = nv
            else:
                rest.pop(key, None)
    return env.from_words(found)


def h_truncate(env: Envelope, f: SuperPolynomial, k: int) -> SuperPolynomial:
    """Drop every term carrying ``h^k`` or a higher power."""
    P = env.poisson_h
    return SuperPolynomial(P.ring, {key: c for key, c in f.items() if P.split_key(key)[1] < k})


def star_product(env: Envelope, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    """``f * g = tau^{-1}(tau(f) tau(g))`` truncated above ``h^H``."""
    return unsymmetrize(env, symmetrize(env, f) * symmetrize(env, g))


def casimir_element(env: Envelope, i: int) -> tuple[SuperPolynomial, EnvElement]:
    """Invariant ``p_i = str(M^i)`` of the generic element and its image ``P_i = tau(p_i)``."""
    from .supermatrix import supertrace

    L = env.algebra
    if L.basis is None:
        raise ValueError("algebra has no matrix realization")
    if i < 1:
        raise ValueError("invariant degree must be positive")
    M = env.poisson.generic_element()
    power = M
    for _ in range(i - 1):
        power = power @ M
    p = supertrace(power)
    return p, symmetrize(env, p)


def supercommutator(a: EnvElement, b: EnvElement) -> EnvElement:
    pa, pb = a.parity(), b.parity()
    if pa is None or pb is None:
        raise ParityError("supercommutator needs homogeneous arguments")
    sign = -1 if pa and pb else 1
    return a * b - (b * a).scale(sign)


def centrality_check(P: EnvElement) -> bool:
    """Whether ``P`` supercommutes with every basis element, exactly to order ``h^H``."""
    env = P.env
    if P.parity() is None:
        raise ParityError("centrality is checked for homogeneous elements")
    return all(supercommutator(P, env.gen(i)).is_zero() for i in range(1, env.dim + 1))


def normal_words(env: Envelope, d: int) -> Iterator[Word]:
    """All normal words of length at most ``d``."""
    dim = env.dim

    def rec(prefix: Word, start: int, left: int) -> Iterator[Word]:
        yield prefix
        if not left:
            return
        for i in range(start, dim + 1):
            nxt = i + 1 if env.is_odd(i) else i
            yield from rec(prefix + (i,), nxt, left - 1)

    yield from rec((), 1, d)


# ---------------------------------------------------------------------------
# the quotient by an orbit ideal


@dataclass
class IdealSpec:
    """Generators ``P_i - c_i(h)`` of the quantized orbit ideal and their classical shadows."""

    generators: list[EnvElement]
    values: list[HScalar]
    shadows: list[SuperPolynomial]
    exponents: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not (len(self.generators) == len(self.values) == len(self.shadows)):
            raise ValueError("ideal data lengths differ")

    def to_json(self) -> dict:
        return {
            "exponents": self.exponents,
            "values": [v.to_json() for v in self.values],
            "shadows": [str(s) for s in self.shadows],
        }


def orbit_ideal(env: Envelope, spec, values: Sequence[HScalar] | None = None) -> IdealSpec:
    """Ideal of the orbit through ``X0 = diag(spec.lambdas)``; ``c_i(h)`` defaults to ``c_i``."""
    from .orbit import orbit_invariants

    cs = orbit_invariants(spec)
    gens, vals, shadows, exps = [], [], [], []
    for idx, (k, c) in enumerate(zip(spec.powers(), cs)):
        p, P = casimir_element(env, k)
        shadow = p - c
        if shadow.is_zero():
            continue
        v = values[idx] if values is not None else HScalar.const(c, env.H)
        if v.coeffs[0] != c:
            raise ValueError("c_i(h) must reduce to c_i at h = 0")
        gens.append(P)
        vals.append(v)
        shadows.append(shadow)
        exps.append(k)
    return IdealSpec(gens, vals, shadows, exps)


def _elimination_key(key) -> tuple:
    evens, mask = key
    ev = sum(evens)
    return (ev, ev + bin(mask).count("1"), evens, tuple(mask_indices(mask)[::-1]))


def _grlex_key(key) -> tuple:
    evens, mask = key
    return (sum(evens) + bin(mask).count("1"), evens, tuple(mask_indices(mask)[::-1]))


ORDERS = {"elimination": _elimination_key, "grlex": _grlex_key}


def _monomials(P: PoissonRing, D: int) -> list:
    s, r = P.algebra.n_even, P.algebra.n_odd
    out = []

    def evens(i: int, left: int, acc: list[int]):
        if i == s:
            yield tuple(acc)
            return
        for e in range(left + 1):
            acc.append(e)
            yield from evens(i + 1, left - e, acc)
            acc.pop()

    for k in range(min(r, D) + 1):
        for odd in combinations(range(r), k):
            mask = sum(1 << j for j in odd)
            for ev in evens(0, D - k, []):
                out.append((ev, mask))
    return out


class ClassicalQuotient:
    """Echelon form of ``span{m * q_j : deg(m q_j) <= D}`` in ``k[g*]`` under a monomial order.

    Rows record which products ``(m, j)`` they combine, so reductions come with
    cofactors.
    """

    def __init__(self, P: PoissonRing, shadows: Sequence[SuperPolynomial], D: int, order: str = "elimination",
                 track: bool = True):
        self.P = P
        self.D = D
        self.shadows = list(shadows)
        keyf = ORDERS[order]
        monos = sorted(_monomials(P, D), key=keyf)
        self.rank_of = {m: i for i, m in enumerate(monos)}
        self.monomials = monos
        self.track = track
        self.pivots: dict[int, tuple[dict[int, Fraction], dict]] = {}
        one = (0,) * P.ring.n_even
        for j, q in enumerate(self.shadows):
            dq = q.degree()
            for m in monos:
                if _mono_degree(m) + dq > D:
                    continue
                mono = SuperPolynomial(P.ring, {m: Fraction(1)}) if m != (one, 0) else P.ring.one()
                row = {self.rank_of[k]: c for k, c in (mono * q).items()}
                self._insert(row, {(m, j): Fraction(1)} if track else {})

    def _reduce(self, row: dict[int, Fraction], tracker: dict) -> None:
        """Eliminate every pivot monomial from ``row`` in place, largest first."""
        heap = [-r for r in row if r in self.pivots]
        heapq.heapify(heap)
        while heap:
            r = -heapq.heappop(heap)
            c = row.get(r)
            if not c:
                continue
            prow, ptrack = self.pivots[r]
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    if k not in row and k in self.pivots:
                        heapq.heappush(heap, -k)
                    row[k] = nv
                else:
                    row.pop(k, None)
            for k, v in ptrack.items():
                nv = tracker.get(k, 0) - c * v
                if nv:
                    tracker[k] = nv
                else:
                    tracker.pop(k, None)

    def _insert(self, row: dict[int, Fraction], tracker: dict) -> None:
        self._reduce(row, tracker)
        if not row:
            return
        lead = max(row)
        inv = 1 / row[lead]
        self.pivots[lead] = ({k: v * inv for k, v in row.items()}, {k: v * inv for k, v in tracker.items()})

    def leading_monomials(self) -> set:
        return {self.monomials[r] for r in self.pivots}

    def standard(self, d: int) -> list:
        """Monomials of degree at most ``d`` that are not leading monomials."""
        return [m for i, m in enumerate(self.monomials) if i not in self.pivots and _mono_degree(m) <= d]

    def reduce(self, f: SuperPolynomial) -> tuple[SuperPolynomial, dict]:
        """``f = remainder + sum_{(m, j)} a_{m,j} m q_j``; returns the remainder and the ``a``."""
        if f.ring != self.P.ring:
            raise SignatureError("polynomial is not in the coordinate ring")
        row = {}
        for k, c in f.items():
            r = self.rank_of.get(k)
            if r is None:
                raise DegreeOverflowError(f"degree {f.degree()} exceeds the working bound {self.D}")
            row[r] = c
        tracker: dict = {}
        self._reduce(row, tracker)
        rem = SuperPolynomial(self.P.ring, {self.monomials[r]: c for r, c in row.items()})
        return rem, {k: -v for k, v in tracker.items()}


def _mono_degree(m) -> int:
    return sum(m[0]) + bin(m[1]).count("1")


def filtration_dims(P: PoissonRing, shadows: Sequence[SuperPolynomial], d: int, slack: int) -> list[int]:
    """``dim V_k / (J cap V_k)`` for k = 0..d, with ``V_k`` the polynomials of degree at most k."""
    cq = ClassicalQuotient(P, shadows, d + slack, order="grlex", track=False)
    dims = []
    for k in range(d + 1):
        total = sum(1 for m in cq.monomials if _mono_degree(m) <= k)
        killed = sum(1 for r in cq.pivots if _mono_degree(cq.monomials[r]) <= k)
        dims.append(total - killed)
    return dims


class QuotientBasis:
    """Basis and reduction map of ``U_h / I_h`` on elements of degree at most ``d``."""

    def __init__(self, env: Envelope, ideal: IdealSpec, d: int, slack: int | None = None,
                 order: str = "elimination"):
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.env = env
        self.ideal = ideal
        self.d = d
        self.slack = env.algebra.n_odd + 1 if slack is None else slack
        self.D = d + self.slack
        P = env.poisson
        # elimination keeps odd monomials standard; grlex makes |basis| match the filtration dims
        self.classical = ClassicalQuotient(P, ideal.shadows, self.D, order=order)
        std = self.classical.standard(d)
        self.basis: list[Word] = sorted((P.split_key(m)[0] for m in std), key=lambda w: (len(w), w))
        dims = filtration_dims(P, ideal.shadows, d, self.slack)
        self.filtration = dims
        self.graded_dims = [dims[0]] + [b - a for a, b in zip(dims, dims[1:])]
        if any(g < 0 for g in self.graded_dims):
            raise ArithmeticError("inconsistent slice dimensions")
        self._lifts: dict = {}

    def _lift(self, m, j: int) -> EnvElement:
        hit = self._lifts.get((m, j))
        if hit is None:
            env = self.env
            w = self.env.poisson.split_key(m)[0]
            gen = self.ideal.generators[j] - env.const(self.ideal.values[j])
            hit = env.word(w) * gen
            self._lifts[(m, j)] = hit
        return hit

    def symbol(self, a: EnvElement) -> SuperPolynomial:
        """h-free part of ``a`` read as a coordinate polynomial."""
        P = self.env.poisson
        terms = {}
        for (w, hp), c in a.terms.items():
            if hp == 0:
                terms[P.key_of(w)] = c
        return SuperPolynomial(P.ring, terms)

    def reduce(self, a: EnvElement) -> EnvElement:
        """Representative of ``a`` modulo ``I_h`` spanned by standard words."""
        env = self.env
        if a.env is not env:
            raise SignatureError("element belongs to a different enveloping algebra")
        if a.degree() > self.d:
            raise DegreeOverflowError(f"input degree {a.degree()} exceeds the cutoff {self.d}")
        rest = a
        out = env.zero()
        for k in range(env.H + 1):
            part = rest.h_part(k)
            if part.is_zero():
                continue
            rem, cof = self.classical.reduce(self.symbol(part))
            words = env.element({(env.poisson.split_key(key)[0], 0): c for key, c in rem.items()})
            corr = words
            for (m, j), c in cof.items():
                corr = corr + self._lift(m, j).scale(c)
            out = out + words.shift(k)
            rest = rest - corr.shift(k)
            if not rest.h_part(k).is_zero():
                raise ArithmeticError("h-order peeling left a residue")
        return out

    def reduce_poly(self, f: SuperPolynomial) -> EnvElement:
        return self.reduce(symmetrize(self.env, f))

    def to_json(self) -> dict:
        return {
            "basis": [list(w) for w in self.basis],
            "rank": len(self.basis),
            "gradedDims": self.graded_dims,
            "cutoff": self.d,
            "ideal": self.ideal.to_json(),
        }


def quotient_basis(env: Envelope, ideal: IdealSpec, d: int, slack: int | None = None,
                   order: str = "elimination") -> QuotientBasis:
    return QuotientBasis(env, ideal, d, slack, order)


# ---------------------------------------------------------------------------
# star product axioms


def random_homogeneous(P: PoissonRing, rng: random.Random, parity: int, max_deg: int = 2,
                       terms: int = 3) -> SuperPolynomial:
    """Random polynomial of one parity with degree at most ``max_deg``."""
    monos = [m for m in _monomials(P, max_deg) if bin(m[1]).count("1") % 2 == parity]
    out = {}
    for _ in range(terms):
        m = rng.choice(monos)
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            out[m] = out.get(m, 0) + c
    return SuperPolynomial(P.ring, {k: v for k, v in out.items() if v})


@dataclass
class StarAxiomReport:
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"checked": self.checked, "ok": self.ok, "failures": self.failures}


def _sample_pairs(env: Envelope, samples: int, seed: int) -> list[tuple[SuperPolynomial, SuperPolynomial]]:
    P = env.poisson
    gens = [P.ring.one()] + [P.coord(i) for i in range(1, env.dim + 1)]
    pairs = [(f, g) for f in gens for g in gens]
    rng = random.Random(seed)
    for _ in range(samples):
        f = random_homogeneous(P, rng, rng.randint(0, 1))
        g = random_homogeneous(P, rng, rng.randint(0, 1))
        pairs.append((f, g))
    return pairs


def star_axiom_check(env: Envelope, quotient: QuotientBasis | None = None, samples: int = 100,
                     seed: int = 0) -> StarAxiomReport:
    """Check ``f*g = fg mod h`` and ``f*g - (-1)^{|f||g|} g*f = h{f,g} mod h^2``.

    With a quotient, both identities are checked after reduction modulo ``I_h``.
    """
    P = env.poisson
    report = StarAxiomReport()
    for f, g in _sample_pairs(env, samples, seed):
        pf, pg = f.parity(), g.parity()
        sign = -1 if pf and pg else 1
        br = poisson_bracket(f, g, P)
        if quotient is None:
            fg = star_product(env, f, g)
            gf = star_product(env, g, f)
            h = env.poisson_h.h()
            ok1 = h_truncate(env, fg - env.to_h_ring(f * g), 1).is_zero()
            ok2 = h_truncate(env, fg - gf.scale(sign) - h * env.to_h_ring(br), 2).is_zero()
        else:
            tf, tg = symmetrize(env, f), symmetrize(env, g)
            fg, gf = tf * tg, tg * tf
            ok1 = quotient.reduce(fg - symmetrize(env, f * g)).truncate(1).is_zero()
            ok2 = quotient.reduce(fg - gf.scale(sign) - symmetrize(env, br).shift(1)).truncate(2).is_zero()
        report.checked += 1
        bad = [name for name, ok in (("classical limit", ok1), ("first-order commutator", ok2)) if not ok]
        if bad:
            report.failures.append({"f": str(f), "g": str(g), "failed": bad})
    return report
