import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geodesy.scalar import (
    ScalarSyntaxError,
    Surd,
    parse_scalar,
    render_scalar,
    sign,
    sqrt_rational,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10])


@st.composite
def surds(draw):
    terms = draw(st.dictionaries(radicands, rationals, max_size=3))
    # route through the parser so normalisation is the library's own
    total = Fraction(0)
    for d, c in terms.items():
        total = total + c * sqrt_rational(d)
    return total


def test_sqrt_extracts_square_factors():
    assert sqrt_rational(8) == 2 * sqrt_rational(2)
    assert sqrt_rational(Fraction(3, 2)) == sqrt_rational(6) / 2
    assert sqrt_rational(9) == 3
    assert isinstance(sqrt_rational(Fraction(4, 9)), Fraction)


def test_products_of_roots_collapse():
    r2, r3 = sqrt_rational(2), sqrt_rational(3)
    assert r2 * r2 == 2
    assert r2 * r3 == sqrt_rational(6)
    assert (r2 + r3) * (r2 - r3) == -1


def test_division_rationalises():
    r2 = sqrt_rational(2)
    assert 1 / (1 + r2) == r2 - 1
    assert (3 + r2) / (3 + r2) == 1


def test_sign_of_near_cancellation():
    # 1.41421356... * 99 - 140 is about 0.0071 > 0
    x = 99 * sqrt_rational(2) - 140
    assert sign(x) == 1
    assert sign(-x) == -1
    assert x > 0 and -x < 0


def test_negative_sqrt_rejected():
    with pytest.raises(ValueError):
        sqrt_rational(-1)


@pytest.mark.parametrize(
    "text,value",
    [
        ("0", Fraction(0)),
        ("-3/4", Fraction(-3, 4)),
        ("sqrt(4)", Fraction(2)),
        ("1/2*sqrt(8)", None),
        ("1+sqrt(2)-sqrt(2)", Fraction(1)),
    ],
)
def test_parse_examples(text, value):
    got = parse_scalar(text)
    if value is None:
        assert got == sqrt_rational(2)
    else:
        assert got == value


@pytest.mark.parametrize("text,column", [("", 1), ("1+", 3), ("2*x", 2), ("sqrt(a)", 1), ("1 + 2", 2)])
def test_parse_errors_report_column(text, column):
    with pytest.raises(ScalarSyntaxError) as info:
        parse_scalar(text)
    assert info.value.column == column


@given(surds())
def test_render_parse_round_trip(x):
    assert parse_scalar(render_scalar(x)) == x


@given(surds(), surds())
def test_field_operations_match_floats(a, b):
    assert math.isclose(float(a + b), float(a) + float(b), abs_tol=1e-9)
    assert math.isclose(float(a * b), float(a) * float(b), rel_tol=1e-9, abs_tol=1e-9)
    assert (a + b) - b == a


@given(surds(), surds())
def test_division_inverts_multiplication(a, b):
    if b == 0:
        return
    assert (a * b) / b == a


@given(surds())
def test_order_agrees_with_float(x):
    f = float(x)
    if abs(f) > 1e-9:
        assert sign(x) == (1 if f > 0 else -1)


def test_surd_is_hashable_and_equal_to_itself():
    x = 1 + sqrt_rational(2)
    assert isinstance(x, Surd)
    assert hash(x) == hash(parse_scalar("1+sqrt(2)"))
