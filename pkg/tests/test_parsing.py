from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcohom.exterior import Form, PolyForm, basis
from nilcohom.operators import JacobiError
from nilcohom.parsing import (
    ParseError,
    format_form,
    format_polyform,
    format_salamon,
    parse_form,
    parse_polyform,
    parse_salamon,
)


def test_salamon_examples():
    a = parse_salamon("0,0,0,12,14,15+23+24")
    e = lambda *i: Form.monomial(6, i)
    assert a.differentials[3] == e(1, 2)
    assert a.differentials[4] == e(1, 4)
    assert a.differentials[5] == e(1, 5) + e(2, 3) + e(2, 4)
    assert parse_salamon("0,0,0,23").differentials[3] == Form.monomial(4, (2, 3))
    assert parse_salamon("0,0,0,0").is_abelian()
    assert not a.is_abelian()


def test_salamon_whitespace_and_parentheses():
    a = parse_salamon("( 0, 0 ,0, 12, 14, 15 + 23 + 24 )")
    assert format_salamon(a) == "0,0,0,12,14,15+23+24"


def test_salamon_errors():
    with pytest.raises(ParseError, match="slots"):
        parse_salamon("0,0,12", 4)
    with pytest.raises(ParseError, match="out of range"):
        parse_salamon("0,0,0,15")
    with pytest.raises(ParseError, match="slot 4"):
        parse_salamon("0,0,0,1x")
    with pytest.raises(ParseError, match="repeated"):
        parse_salamon("0,0,0,22")


def test_salamon_jacobi_violation_names_form():
    with pytest.raises(JacobiError) as info:
        parse_salamon("0,0,12,13,14,34+25")
    assert info.value.index == 6
    assert "e^6" in str(info.value)


def test_form_examples():
    e = lambda *i: Form.monomial(6, i)
    assert parse_form("16+25-34", 6) == e(1, 6) + e(2, 5) - e(3, 4)
    assert parse_form("12+34+56", 6) == e(1, 2) + e(3, 4) + e(5, 6)
    assert parse_form("1/2*12", 6) == e(1, 2) * Fraction(1, 2)
    assert parse_form("21", 6) == -e(1, 2)
    assert parse_form("const(-3/4)", 6) == Form.constant(6, Fraction(-3, 4))


def test_form_errors():
    with pytest.raises(ParseError, match="mixed degrees"):
        parse_form("12+3", 4)
    with pytest.raises(ParseError, match="rational"):
        parse_form("1/x*12", 4)
    with pytest.raises(ParseError, match="repeated"):
        parse_form("11", 4)
    with pytest.raises(ParseError, match="degree"):
        parse_form("0", 4)
    with pytest.raises(ParseError, match="cannot parse"):
        parse_form("12++34", 4)
    # whitespace is ignored, so this is the single monomial e^1234
    assert parse_form("12 34", 4) == Form.monomial(4, (1, 2, 3, 4))


def test_dotted_indices_for_large_dimension():
    f = parse_form("1.12-3.10", 12)
    assert f == Form.monomial(12, (1, 12)) - Form.monomial(12, (3, 10))
    assert format_form(f) == "1.12-3.10"
    assert parse_form("12", 12) == Form.monomial(12, (12,))
    assert parse_form("1.2", 6) == Form.monomial(6, (1, 2))


def test_polyform_examples():
    p = parse_polyform("2-t*4", 6)
    assert p.evaluate(3) == Form.monomial(6, (2,)) - Form.monomial(6, (4,)) * 3
    q = parse_polyform("t^2*16-1/2*t*13", 6)
    assert q.evaluate(2) == Form.monomial(6, (1, 6)) * 4 - Form.monomial(6, (1, 3))
    assert parse_polyform(format_polyform(q), 6) == q


@st.composite
def forms(draw, dim):
    k = draw(st.integers(0, dim))
    idxs = basis(dim, k)
    num = st.integers(-5, 5)
    den = st.integers(1, 4)
    coeffs = draw(st.lists(st.builds(Fraction, num, den), min_size=len(idxs), max_size=len(idxs)))
    return Form(dim, k, dict(zip(idxs, coeffs)))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([4, 6, 11]).flatmap(forms))
def test_form_round_trip(f):
    assert parse_form(format_form(f), f.dim, f.degree) == f


@settings(max_examples=40, deadline=None)
@given(st.lists(st.builds(Fraction, st.integers(-3, 3), st.integers(1, 3)), min_size=3, max_size=3),
       st.sampled_from(basis(6, 2)))
def test_polyform_round_trip(coeffs, idx):
    p = PolyForm(6, 2, {idx: coeffs})
    assert parse_polyform(format_polyform(p), 6, 2) == p


@pytest.mark.parametrize("s", ["0,0,0,12,14,15+23+24", "0,16+35,0,15-36,0,0", "0,0,12,13", "0,0,0,0"])
def test_salamon_round_trip(s):
    a = parse_salamon(s)
    assert format_salamon(a) == s
    assert parse_salamon(format_salamon(a)).differentials == a.differentials
