from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import Grassmann
from superorbit.errors import NotInvertibleError, ParityError, SignatureError
from superorbit.parser import parse
from superorbit.superring import (EVEN, ODD, RingSignature, SuperPolynomial, body, from_json, odd_component,
                                  odd_normalize, parity_of, poly_arith, poly_invert, poly_mul, substitute, to_json)

R = RingSignature(3, 4)


def P(text, ring=R):
    return parse(text, ring)


# -- odd_normalize -------------------------------------------------------------

@pytest.mark.parametrize("indices, expected", [
    ([2, 1], (-1, (1, 2))),
    ([1, 1], (0, ())),
    ([3, 1, 2], (1, (1, 2, 3))),
    ([], (1, ())),
    ([4, 3, 2, 1], (1, (1, 2, 3, 4))),
])
def test_odd_normalize(indices, expected):
    sign, idx = odd_normalize(indices, 4)
    assert sign == expected[0]
    if sign:
        assert idx == expected[1]


def test_odd_normalize_range():
    with pytest.raises(SignatureError):
        odd_normalize([5], 4)


# -- arithmetic examples -------------------------------------------------------

def test_poly_arith_examples():
    assert poly_arith(P("x1"), P("x1"), "add") == P("2*x1")
    assert poly_arith(P("t1*t2"), P("t1*t2"), "sub").is_zero()
    assert poly_arith(P("x1 + t1"), Fraction(1, 2), "scale") == P("1/2*x1 + 1/2*t1")


def test_poly_mul_examples():
    assert poly_mul(P("t2"), P("t1")) == P("-t1*t2")
    assert poly_mul(P("t1*t2"), P("t2*t3")).is_zero()
    assert poly_mul(P("x1 + t1*t2"), P("x1 - t1*t2")) == P("x1^2")


def test_signature_mismatch():
    other = RingSignature(1, 1)
    with pytest.raises(SignatureError):
        P("x1") + other.even(1)


def test_parity_examples():
    assert parity_of(P("x1*t1*t2")) == EVEN
    assert parity_of(P("t1 + x1*t2")) == ODD
    assert parity_of(P("x1 + t1")) is None
    assert parity_of(R.zero()) == EVEN


def test_body_examples():
    assert body(P("x1 + 2*t1*t2")) == P("x1")
    assert body(P("t1")).is_zero()
    assert body(P("3 + x2*t1*t2 + x2^2")) == P("3 + x2^2")


def test_odd_component_examples():
    a = P("x1 + t1 + t1*t2")
    assert odd_component(a, 1) == P("t1")
    assert odd_component(a, 0) == P("x1")
    assert odd_component(P("t1*t2*t3"), 2).is_zero()


def test_invert_examples():
    assert poly_invert(P("1 + t1*t2")) == P("1 - t1*t2")
    assert poly_invert(P("2")) == P("1/2")
    # geometric series to order 2, frozen after multiplying back below
    expected = P("1 - t1*t2 - t3*t4 + 2*t1*t2*t3*t4")
    a = P("1 + t1*t2 + t3*t4")
    assert poly_invert(a) == expected
    assert a * expected == R.one()


def test_invert_rejects_non_constant_body():
    with pytest.raises(NotInvertibleError):
        poly_invert(P("x1 + t1*t2"))
    with pytest.raises(NotInvertibleError):
        poly_invert(P("t1*t2"))


def test_capped_even_generator_truncates_and_inverts():
    eps = RingSignature(1, 2, caps=(1,), even_names=("e",))
    e = eps.gen("e")
    assert (e * e).is_zero()
    a = eps.const(3) + e
    assert a * a.invert() == eps.one()


def test_substitute_examples():
    assert substitute(P("x1 + 1"), {"x1": P("x1^2")}) == P("x1^2 + 1")
    assert substitute(P("t1*t2"), {"t1": P("t2")}).is_zero()
    assert substitute(P("t1*t2"), {"t1": P("x1*t1"), "t2": P("t2")}) == P("x1*t1*t2")


def test_substitute_parity_mismatch():
    with pytest.raises(ParityError):
        substitute(P("t1"), {"t1": P("x1")})


def test_substitute_composition():
    f = P("x1*t1 + t2*t3 + x2^2")
    s1 = {"x1": P("x2 + t1*t2"), "t1": P("x1*t3")}
    s2 = {"x2": P("3*x1"), "t3": P("t1 + t4")}
    lhs = substitute(substitute(f, s1), s2)
    composed = {k: substitute(v, s2) for k, v in s1.items()}
    for name, v in s2.items():
        composed.setdefault(name, v)
    assert lhs == substitute(f, composed)


def test_text_and_json_round_trip():
    a = P("2*t1*t2*t3*t4 - t1*t2 - t3*t4 + 1 + 1/3*x1^2*t2")
    assert P(str(a)) == a
    assert from_json(R, to_json(a)) == a
    assert str(R.zero()) == "0"


def test_derivatives_graded_leibniz():
    a, b = P("x1*t1 + t2"), P("t1*t3 + x2")
    # left derivative is a degree-one odd derivation from the left
    d = lambda f: f.derivative("t1", "left")
    assert d(a * b) == d(a) * b + (-1) ** 1 * a * d(b)


# -- properties against the independent oracle ----------------------------------

def _terms(n_even, n_odd, max_deg=2):
    mono = st.tuples(
        st.lists(st.integers(0, max_deg), min_size=n_even, max_size=n_even),
        st.lists(st.integers(1, n_odd), max_size=n_odd, unique=True) if n_odd else st.just([]),
        st.fractions(min_value=-5, max_value=5, max_denominator=4),
    )
    return st.lists(mono, max_size=5)


def _build(ring, terms, parity=None):
    out = ring.zero()
    for evens, odd, c in terms:
        if parity is not None and len(odd) % 2 != parity:
            continue
        out = out + ring.monomial(evens, odd, c)
    return out


polys = _terms(3, 4).map(lambda t: _build(R, t))


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_product_matches_oracle(a, b):
    assert Grassmann.from_engine(a * b) == Grassmann.from_engine(a) * Grassmann.from_engine(b)


@settings(max_examples=60, deadline=None)
@given(_terms(3, 4), _terms(3, 4), st.integers(0, 1), st.integers(0, 1))
def test_supercommutativity(ta, tb, pa, pb):
    a, b = _build(R, ta, pa), _build(R, tb, pb)
    assert a * b == (b * a).scale((-1) ** (pa * pb))


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_body_is_a_morphism(a, b):
    assert body(a * b) == body(a) * body(b)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_odd_components_sum_back(a):
    total = R.zero()
    for k in range(R.n_odd + 1):
        total = total + odd_component(a, k)
    assert total == a


@settings(max_examples=60, deadline=None)
@given(_terms(0, 4), st.fractions(min_value=1, max_value=5, max_denominator=3))
def test_inverse_round_trip(t, c):
    ring = RingSignature(0, 4)
    a = ring.const(c) + _build(ring, [(e, o, k) for e, o, k in t if o])
    assert a * a.invert() == ring.one()


def test_zero_coefficients_are_not_stored():
    a = P("x1 + t1") - P("x1")
    assert isinstance(a, SuperPolynomial)
    assert all(c != 0 for _, c in a.items())
    assert len(a) == 1
