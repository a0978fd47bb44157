from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcohom.exterior import (
    CoframeIndexError,
    Form,
    PolyForm,
    basis,
    canonicalize,
    complement,
    interior_product,
    substitute,
    wedge,
)

DIM = 5


@st.composite
def forms(draw, degree=None, dim=DIM):
    k = draw(st.integers(0, dim)) if degree is None else degree
    idxs = basis(dim, k)
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(idxs), max_size=len(idxs)))
    return Form(dim, k, dict(zip(idxs, coeffs)))


def test_canonicalize_sign_and_repeat():
    assert canonicalize((2, 1)) == ((1, 2), -1)
    assert canonicalize((3, 1, 2)) == ((1, 2, 3), 1)
    assert canonicalize((1, 2, 1)) == ((), 0)
    with pytest.raises(CoframeIndexError):
        canonicalize((0, 1), dim=3)


def test_basis_sizes_and_order():
    assert [len(basis(6, k)) for k in range(7)] == [1, 6, 15, 20, 15, 6, 1]
    assert basis(4, 2) == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    assert basis(4, 5) == ()
    assert basis(4, -1) == ()


def test_complement_sign():
    # e^I ^ e^comp(I) = sign * vol
    for idx in basis(5, 2):
        rest, sign = complement(5, idx)
        vol = Form.monomial(5, idx) ^ Form.monomial(5, rest)
        assert vol == Form.monomial(5, (1, 2, 3, 4, 5), sign)


def test_wedge_of_monomials():
    e = lambda *i: Form.monomial(4, i)
    assert e(2) ^ e(1) == -e(1, 2)
    assert e(1) ^ e(1) == Form(4, 2)
    assert e(1, 2) ^ e(3, 4) == e(1, 2, 3, 4)
    assert (e(1, 3) ^ e(2, 4)) == -e(1, 2, 3, 4)


def test_zero_form_is_falsy_and_float_rejected():
    assert not Form(3, 2)
    with pytest.raises(TypeError):
        Form(3, 1, {(1,): 0.5})


@settings(max_examples=60, deadline=None)
@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    assert (a ^ b) ^ c == a ^ (b ^ c)


@settings(max_examples=60, deadline=None)
@given(forms(), forms())
def test_wedge_graded_commutative(a, b):
    sign = (-1) ** (a.degree * b.degree)
    assert a ^ b == (b ^ a) * sign


@settings(max_examples=60, deadline=None)
@given(forms(degree=2), forms(degree=2), st.integers(-4, 4))
def test_linearity(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == Form(DIM, 2)


@settings(max_examples=60, deadline=None)
@given(forms(), forms(), st.integers(1, DIM))
def test_interior_product_is_antiderivation(a, b, i):
    lhs = interior_product(i, a ^ b)
    rhs = (interior_product(i, a) ^ b) + (a ^ interior_product(i, b)) * (-1) ** a.degree
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(forms(), st.integers(1, DIM), st.integers(1, DIM))
def test_interior_products_anticommute(a, i, j):
    assert interior_product(i, interior_product(j, a)) == -interior_product(j, interior_product(i, a))


@settings(max_examples=40, deadline=None)
@given(forms(), forms(), st.lists(forms(degree=1), min_size=DIM, max_size=DIM))
def test_substitute_is_algebra_homomorphism(a, b, images):
    assert substitute(a ^ b, images) == substitute(a, images) ^ substitute(b, images)


def test_vector_round_trip():
    f = Form(4, 2, {(1, 2): Fraction(1, 2), (3, 4): -3})
    assert Form.from_vector(4, 2, f.to_vector()) == f


def test_polyform_evaluate_and_wedge():
    e = lambda *i: Form.monomial(4, i)
    p = PolyForm.from_form(e(1)) + PolyForm.from_form(e(2), 1)  # e1 + t e2
    q = PolyForm.from_form(e(3)) - PolyForm.from_form(e(4), 2)  # e3 - t^2 e4
    for t in (Fraction(0), Fraction(1), Fraction(-2, 3)):
        assert (p ^ q).evaluate(t) == p.evaluate(t) ^ q.evaluate(t)
    assert p.components() == [e(1), e(2)]
