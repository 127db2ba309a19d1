from fractions import Fraction as Fr

import pytest

from fwreath.constructions import default_generators
from fwreath.exactnum import Interval, IntervalSet
from fwreath.plmap import (
    PLDomainError,
    PLMap,
    bump_decomposition,
    commutator,
    compose,
    evaluate,
    fixed_set,
    fundamental_domain,
    interpolate,
    invert,
    is_in_F,
)

import pl_oracle as O

HALF_MAP = PLMap([(0, 0), (Fr(1, 2), Fr(1, 4)), (1, 1)])


def to_oracle(m):
    return tuple((Fr(x), Fr(y)) for x, y in zip(m.xs, m.ys))


def test_evaluate_examples():
    assert evaluate(PLMap.identity(), Fr(5, 8)) == Fr(5, 8)
    assert evaluate(HALF_MAP, Fr(1, 2)) == Fr(1, 4)
    assert evaluate(HALF_MAP, Fr(1, 4)) == Fr(1, 8)


def test_compose_inverse_identity():
    h, f = default_generators()
    assert compose(h, invert(h)).is_identity()
    assert compose(PLMap.identity(), f) == f
    assert invert(PLMap.identity()).is_identity()
    assert commutator(f, f).is_identity()


def test_right_action_order():
    h, f = default_generators()
    x = Fr(3, 8)
    assert (h * f)(x) == f(h(x))
    assert to_oracle(h * f) == O.comp(to_oracle(h), to_oracle(f))


def test_fixed_sets():
    h, _ = default_generators()
    assert fixed_set(PLMap.identity()) == IntervalSet.unit()
    assert fixed_set(h) == IntervalSet.parse("[0,1/4],[3/4,1]")


def test_disjoint_bumps_commute():
    a = interpolate([Fr(1, 8), Fr(3, 16), Fr(1, 4)], [Fr(1, 8), Fr(7, 32), Fr(1, 4)])
    b = interpolate([Fr(1, 2), Fr(5, 8), Fr(3, 4)], [Fr(1, 2), Fr(11, 16), Fr(3, 4)])
    assert fixed_set(commutator(a, b)) == IntervalSet.unit()
    assert len(bump_decomposition(a * b)) == 2


def test_default_h_one_bump():
    h, _ = default_generators()
    bumps = bump_decomposition(h)
    assert [b.interval for b in bumps] == [Interval(Fr(1, 4), Fr(3, 4))]
    assert bump_decomposition(PLMap.identity()) == []


def test_fundamental_domains():
    # frozen from the Fraction oracle: h(1/2) = 21/32, h^-1(1/2) = 5/16
    h, _ = default_generators()
    (b,) = bump_decomposition(h)
    assert fundamental_domain(b, Fr(1, 2)) == Interval(Fr(1, 2), Fr(21, 32))
    (bi,) = bump_decomposition(~h)
    assert bi.direction == -1
    assert fundamental_domain(bi, Fr(1, 2)) == Interval(Fr(5, 16), Fr(1, 2))
    with pytest.raises(PLDomainError):
        fundamental_domain(b, Fr(1, 4))


def test_interpolate_examples():
    m = interpolate([Fr(1, 4)], [Fr(1, 2)])
    assert m(Fr(1, 4)) == Fr(1, 2) and is_in_F(m)
    h = interpolate([Fr(1, 4), Fr(3, 8), Fr(3, 4)], [Fr(1, 4), Fr(5, 8), Fr(3, 4)])
    assert [b.interval for b in bump_decomposition(h)] == [Interval(Fr(1, 4), Fr(3, 4))]
    assert interpolate([Fr(1, 4), Fr(1, 2)], [Fr(1, 4), Fr(1, 2)]).is_identity()


def test_is_in_F():
    assert is_in_F(PLMap.identity())
    assert not is_in_F(PLMap([(0, 0), (Fr(1, 4), Fr(3, 4)), (1, 1)]))
    h, f = default_generators()
    assert is_in_F(h) and is_in_F(f) and is_in_F(h * f)


def test_bad_breakpoints():
    with pytest.raises(PLDomainError):
        PLMap([(0, 0), (Fr(1, 2), Fr(1, 2))])
    with pytest.raises(PLDomainError):
        PLMap([(0, 0), (Fr(1, 2), Fr(3, 4)), (Fr(1, 2), Fr(7, 8)), (1, 1)])


def test_text_round_trip():
    h, _ = default_generators()
    assert PLMap.parse(h.to_text()) == h
    assert PLMap.parse(h.to_text("; ")) == h


def test_powers_match_oracle():
    h, f = default_generators()
    for n in (-3, -1, 2, 4):
        assert to_oracle(f ** n) == O.power(to_oracle(f), n)
