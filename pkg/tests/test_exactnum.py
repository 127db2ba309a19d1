from fractions import Fraction as Fr

import pytest

from fwreath.exactnum import (
    Dyadic,
    DyadicParseError,
    Interval,
    IntervalSet,
    dy_add,
    dy_cmp,
    dy_mul,
    dy_neg,
    exact,
    is_dyadic,
    parse_exact,
    render_exact,
)


def d(text):
    return parse_exact(text)


def test_add_examples():
    assert dy_add(d("1/2"), d("1/4")) == d("3/4")
    x = d("5/2^7")
    assert dy_add(d("0"), x) == x
    one = dy_add(d("3/8"), d("5/8"))
    assert render_exact(one) == "1/2^0"


def test_mul_neg_cmp():
    assert dy_mul(d("1/2"), d("1/2")) == d("1/4")
    assert dy_cmp(d("3/8"), d("5/16")) == 1
    assert dy_neg(d("0")) == d("0")


def test_canonical_form():
    assert Dyadic(6, 4) == Dyadic(3, 3)
    assert render_exact(Dyadic(6, 4)) == "3/2^3"
    assert Dyadic(1, 1) == Fr(1, 2)
    assert hash(Dyadic(1, 1)) == hash(Fr(1, 2))


@pytest.mark.parametrize("text", ["3/2^3", "3/8", "6/16", "0.375"])
def test_parse_forms(text):
    if text == "0.375":
        with pytest.raises(DyadicParseError):
            parse_exact(text)
    else:
        assert parse_exact(text) == Fr(3, 8)


def test_parse_rejects_non_dyadic_naming_token():
    with pytest.raises(DyadicParseError) as info:
        parse_exact("3/5")
    assert "3/5" in str(info.value)


def test_fraction_fallback():
    x = parse_exact("1/3", dyadic_only=False)
    assert x == Fr(1, 3) and not is_dyadic(x)
    assert isinstance(exact(Fr(1, 4)), Dyadic)


def test_interval_set_examples():
    a = IntervalSet([Interval(0, Fr(1, 4))])
    b = IntervalSet([Interval(Fr(1, 4), Fr(1, 2))])
    assert (a | b).parts == (Interval(0, Fr(1, 2)),)
    c = IntervalSet([Interval(Fr(1, 2), Fr(3, 4))])
    assert (a & c).is_empty()
    assert IntervalSet([Interval(Fr(1, 8), Fr(1, 4))]).subset(IntervalSet([Interval(0, Fr(1, 2))]))


def test_interval_text_round_trip():
    s = IntervalSet.parse("[0,1/4],[1/2,3/4]")
    assert IntervalSet.parse(str(s)) == s
    assert str(s.complement()) == "[1/2^2,1/2^1],[3/2^2,1/2^0]"


def test_strict_interior():
    outer = Interval(Fr(3, 8), Fr(5, 8))
    assert Interval(Fr(13, 32), Fr(19, 32)).strictly_inside(outer)
    assert not Interval(Fr(3, 8), Fr(1, 2)).strictly_inside(outer)
