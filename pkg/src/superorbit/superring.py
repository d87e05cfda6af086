"""Sparse exact arithmetic in free supercommutative rings.

An element of ``k[x_1..x_M, t_1..t_N]`` is stored as a dict mapping a monomial
key to a :class:`~fractions.Fraction` coefficient.  The key is a pair
``(evens, mask)``: a tuple of M even exponents and an integer bitmask of the odd
generators present (bit ``i - 1`` for ``t_i``).  Odd generators inside a key are
always understood in ascending order; the sign produced by sorting them is
folded into the coefficient when the term is built.

Even generators may carry an exponent cap.  A cap of 1 gives the dual-number
parameter (``eps**2 == 0``); any product that would exceed a cap is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import NotInvertibleError, ParityError, SignatureError

EVEN, ODD, MIXED = 0, 1, None

Key = tuple[tuple[int, ...], int]
ScalarLike = Union[int, Fraction, str]


def to_scalar(value: ScalarLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class RingSignature:
    """Generators of a free supercommutative ring.

    ``caps[i]`` is the largest allowed exponent of the i-th even generator, or
    None for no truncation.
    """

    n_even: int = 0
    n_odd: int = 0
    caps: tuple[int | None, ...] = ()
    even_names: tuple[str, ...] = ()
    odd_names: tuple[str, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.n_even < 0 or self.n_odd < 0:
            raise SignatureError("generator counts must be non-negative")
        caps = tuple(self.caps) or (None,) * self.n_even
        if len(caps) != self.n_even:
            raise SignatureError("one cap entry per even generator is required")
        if any(c is not None and c < 1 for c in caps):
            raise SignatureError("exponent caps must be >= 1")
        even_names = tuple(self.even_names) or tuple(f"x{i}" for i in range(1, self.n_even + 1))
        odd_names = tuple(self.odd_names) or tuple(f"t{i}" for i in range(1, self.n_odd + 1))
        if len(even_names) != self.n_even or len(odd_names) != self.n_odd:
            raise SignatureError("one display name per generator is required")
        names = even_names + odd_names
        if len(set(names)) != len(names):
            raise SignatureError("generator names must be distinct")
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "even_names", even_names)
        object.__setattr__(self, "odd_names", odd_names)
        index = {n: (EVEN, i) for i, n in enumerate(even_names, 1)}
        index.update({n: (ODD, i) for i, n in enumerate(odd_names, 1)})
        object.__setattr__(self, "_index", index)

    # -- element constructors -------------------------------------------------

    def zero(self) -> SuperPolynomial:
        return SuperPolynomial(self, {})

    def one(self) -> SuperPolynomial:
        return self.const(1)

    def const(self, c: ScalarLike) -> SuperPolynomial:
        return SuperPolynomial(self, {((0,) * self.n_even, 0): to_scalar(c)})

    def even(self, i: int) -> SuperPolynomial:
        if not 1 <= i <= self.n_even:
            raise SignatureError(f"even generator index {i} out of range 1..{self.n_even}")
        evens = [0] * self.n_even
        evens[i - 1] = 1
        return SuperPolynomial(self, {(tuple(evens), 0): Fraction(1)})

    def odd(self, i: int) -> SuperPolynomial:
        if not 1 <= i <= self.n_odd:
            raise SignatureError(f"odd generator index {i} out of range 1..{self.n_odd}")
        return SuperPolynomial(self, {((0,) * self.n_even, 1 << (i - 1)): Fraction(1)})

    def gen(self, name: str) -> SuperPolynomial:
        kind, i = self.lookup(name)
        return self.even(i) if kind == EVEN else self.odd(i)

    def lookup(self, name: str) -> tuple[int, int]:
        try:
            return self._index[name]
        except KeyError:
            raise SignatureError(f"unknown generator {name!r}") from None

    def monomial(self, evens: Sequence[int], odd: Sequence[int], coeff: ScalarLike = 1) -> SuperPolynomial:
        """The term ``coeff * x^evens * t_{odd[0]} * t_{odd[1]} * ...`` in the given order."""
        if len(evens) != self.n_even or any(e < 0 for e in evens):
            raise SignatureError("even exponent vector has the wrong shape")
        sign, idx = odd_normalize(odd, self.n_odd)
        if sign == 0 or not self._within_caps(evens):
            return self.zero()
        mask = 0
        for i in idx:
            mask |= 1 << (i - 1)
        return SuperPolynomial(self, {(tuple(evens), mask): sign * to_scalar(coeff)})

    def names(self) -> tuple[str, ...]:
        return self.even_names + self.odd_names

    def _within_caps(self, evens: Sequence[int]) -> bool:
        return all(c is None or e <= c for e, c in zip(evens, self.caps))

    def nilpotent_even(self) -> tuple[bool, ...]:
        return tuple(c is not None for c in self.caps)


def odd_normalize(indices: Sequence[int], n_odd: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Sort a product of odd generators.

    Returns ``(sign, ascending_indices)``; sign is 0 when an index repeats.
    """
    if n_odd is not None:
        for i in indices:
            if not 1 <= i <= n_odd:
                raise SignatureError(f"odd generator index {i} out of range 1..{n_odd}")
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a in range(len(indices)) for b in range(a + 1, len(indices)) if indices[a] > indices[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


@lru_cache(maxsize=1 << 16)
def _merge_sign(a: int, b: int) -> int:
    """Sign of moving the odd generators of ``b`` to their sorted slots after ``a``."""
    count = 0
    while b:
        low = b & -b
        count += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if count & 1 else 1


def mask_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class SuperPolynomial:
    """Immutable element of a free supercommutative ring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSignature, terms: Mapping[Key, Fraction]):
        self.ring = ring
        self._terms = {k: v for k, v in terms.items() if v != 0}
        self._hash = None

    # -- inspection -----------------------------------------------------------

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    def terms(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
        """Public view: ``{(even_exponents, odd_indices): coeff}`` with 1-based odd indices."""
        return {(e, mask_indices(m)): c for (e, m), c in self._terms.items()}

    def sorted_items(self) -> list[tuple[Key, Fraction]]:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self._terms.items(), key=lambda kv: self._order_key(kv[0]), reverse=True)

    def _order_key(self, key: Key):
        evens, mask = key
        bits = tuple((mask >> i) & 1 for i in range(self.ring.n_odd))
        return (sum(evens) + mask.bit_count(), evens, bits)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.n_even
        return all(k == (zero, 0) for k in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(((0,) * self.ring.n_even, 0), Fraction(0))

    def degree(self) -> int:
        """Total degree, -1 for zero."""
        return max((sum(e) + m.bit_count() for e, m in self._terms), default=-1)

    def odd_degrees(self) -> set[int]:
        return {m.bit_count() for _, m in self._terms}

    def parity(self) -> int | None:
        """EVEN, ODD, or MIXED (None).  Zero reports EVEN."""
        ps = {m.bit_count() & 1 for _, m in self._terms}
        if not ps:
            return EVEN
        return ps.pop() if len(ps) == 1 else MIXED

    def is_homogeneous_of(self, p: int) -> bool:
        return all(m.bit_count() & 1 == p for _, m in self._terms)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> SuperPolynomial:
        if isinstance(other, SuperPolynomial):
            if other.ring != self.ring:
                raise SignatureError("operands belong to different rings")
            return other
        return self.ring.const(to_scalar(other))

    def __add__(self, other) -> SuperPolynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return SuperPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> SuperPolynomial:
        return SuperPolynomial(self.ring, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> SuperPolynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> SuperPolynomial:
        return (-self) + other

    def scale(self, c: ScalarLike) -> SuperPolynomial:
        c = to_scalar(c)
        return SuperPolynomial(self.ring, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> SuperPolynomial:
        if not isinstance(other, SuperPolynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.ring != self.ring:
            raise SignatureError("operands belong to different rings")
        caps = self.ring.caps
        capped = any(c is not None for c in caps)
        out: dict[Key, Fraction] = {}
        for (ea, ma), ca in self._terms.items():
            for (eb, mb), cb in other._terms.items():
                if ma & mb:
                    continue
                evens = tuple(x + y for x, y in zip(ea, eb))
                if capped and any(c is not None and e > c for e, c in zip(evens, caps)):
                    continue
                key = (evens, ma | mb)
                c = ca * cb
                if mb and ma:
                    c = c * _merge_sign(ma, mb)
                out[key] = out.get(key, 0) + c
        return SuperPolynomial(self.ring, out)

    def __rmul__(self, other) -> SuperPolynomial:
        # scalars commute with everything
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other) -> SuperPolynomial:
        return self.scale(1 / to_scalar(other))

    def __pow__(self, k: int) -> SuperPolynomial:
        if k < 0:
            return self.invert() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, SuperPolynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            return self._terms == self.ring.const(to_scalar(other))._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- structural maps ------------------------------------------------------

    def body(self) -> SuperPolynomial:
        return SuperPolynomial(self.ring, {k: v for k, v in self._terms.items() if k[1] == 0})

    def odd_component(self, k: int) -> SuperPolynomial:
        return SuperPolynomial(self.ring, {key: v for key, v in self._terms.items() if key[1].bit_count() == k})

    def even_part(self) -> SuperPolynomial:
        return SuperPolynomial(self.ring, {key: v for key, v in self._terms.items() if not key[1].bit_count() & 1})

    def odd_part(self) -> SuperPolynomial:
        return SuperPolynomial(self.ring, {key: v for key, v in self._terms.items() if key[1].bit_count() & 1})

    def is_nilpotent_term(self, key: Key) -> bool:
        evens, mask = key
        if mask:
            return True
        return any(e and c is not None for e, c in zip(evens, self.ring.caps))

    def invert(self) -> SuperPolynomial:
        """Inverse of ``c + eta`` with c a nonzero constant and eta nilpotent."""
        c = self.constant_term()
        zero = ((0,) * self.ring.n_even, 0)
        if c == 0 or any(k != zero and not self.is_nilpotent_term(k) for k in self._terms):
            raise NotInvertibleError(f"{self} is not a unit (constant body plus nilpotent part required)")
        u = (self - c).scale(-1 / c)
        out = self.ring.one()
        power = self.ring.one()
        while True:
            power = power * u
            if not power:
                break
            out = out + power
        return out.scale(1 / c)

    def derivative(self, name: str, side: str = "left") -> SuperPolynomial:
        """Graded partial derivative by a generator.

        ``side="left"`` moves the odd generator to the front before deleting it,
        ``side="right"`` moves it to the back.
        """
        kind, i = self.ring.lookup(name)
        out: dict[Key, Fraction] = {}
        if kind == EVEN:
            for (e, m), c in self._terms.items():
                if e[i - 1]:
                    ne = list(e)
                    ne[i - 1] -= 1
                    key = (tuple(ne), m)
                    out[key] = out.get(key, 0) + c * e[i - 1]
        else:
            bit = 1 << (i - 1)
            for (e, m), c in self._terms.items():
                if m & bit:
                    before = (m & (bit - 1)).bit_count()
                    after = (m >> i).bit_count()
                    passed = before if side == "left" else after
                    key = (e, m ^ bit)
                    out[key] = out.get(key, 0) + (-c if passed & 1 else c)
        return SuperPolynomial(self.ring, out)

    def substitute(self, assignment: Mapping[str, SuperPolynomial], target: RingSignature | None = None) -> SuperPolynomial:
        """Apply the parity-preserving ring morphism sending generators to ``assignment``.

        Generators missing from the assignment go to the same-named generator of
        ``target`` (defaults to this ring).
        """
        target = target or self.ring
        images_even, images_odd = [], []
        for names, kind, store in ((self.ring.even_names, EVEN, images_even), (self.ring.odd_names, ODD, images_odd)):
            for name in names:
                img = assignment.get(name)
                if img is None:
                    img = target.gen(name)
                    if target.lookup(name)[0] != kind:
                        raise ParityError(f"generator {name} changes parity in the target ring")
                if not isinstance(img, SuperPolynomial):
                    img = target.const(to_scalar(img))
                if img.ring != target:
                    raise SignatureError(f"image of {name} is not in the target ring")
                if img and not img.is_homogeneous_of(kind):
                    raise ParityError(f"image of {name} must be {'even' if kind == EVEN else 'odd'}")
                store.append(img)
        for name in assignment:
            self.ring.lookup(name)
        power_cache: dict[tuple[int, int], SuperPolynomial] = {}

        def power(i: int, e: int) -> SuperPolynomial:
            if (i, e) not in power_cache:
                power_cache[(i, e)] = images_even[i] ** e
            return power_cache[(i, e)]

        out = target.zero()
        for (evens, mask), c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(evens):
                if e:
                    term = term * power(i, e)
            for j in mask_indices(mask):
                term = term * images_odd[j - 1]
            out = out + term
        return out

    # -- text -----------------------------------------------------------------

    def monomial_text(self, key: Key) -> str:
        evens, mask = key
        parts = []
        for name, e in zip(self.ring.even_names, evens):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        parts.extend(self.ring.odd_names[i - 1] for i in mask_indices(mask))
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for key, c in self.sorted_items():
            mono = self.monomial_text(key)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"


def poly_arith(a: SuperPolynomial, b, op: str) -> SuperPolynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def poly_mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a * b


def parity_of(a: SuperPolynomial) -> int | None:
    return a.parity()


def body(a: SuperPolynomial) -> SuperPolynomial:
    return a.body()


def odd_component(a: SuperPolynomial, k: int) -> SuperPolynomial:
    return a.odd_component(k)


def poly_invert(a: SuperPolynomial) -> SuperPolynomial:
    return a.invert()


def substitute(a: SuperPolynomial, assignment: Mapping[str, SuperPolynomial], target: RingSignature | None = None) -> SuperPolynomial:
    return a.substitute(assignment, target)


def poly_sum(ring: RingSignature, items: Iterable[SuperPolynomial]) -> SuperPolynomial:
    out: dict[Key, Fraction] = {}
    for p in items:
        for k, v in p._terms.items():
            out[k] = out.get(k, 0) + v
    return SuperPolynomial(ring, out)


def to_json(a: SuperPolynomial) -> list[dict]:
    return [
        {"even": list(e), "odd": list(mask_indices(m)), "coeff": str(c)}
        for (e, m), c in a.sorted_items()
    ]


def from_json(ring: RingSignature, data: Sequence[Mapping]) -> SuperPolynomial:
    out = ring.zero()
    for term in data:
        out = out + ring.monomial(term.get("even", [0] * ring.n_even), term.get("odd", []), to_scalar(term["coeff"]))
    return out
