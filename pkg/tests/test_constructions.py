from fractions import Fraction as Fr

import pytest

from fwreath.constructions import (
    DEFAULT_Y0,
    F_SUPPORT,
    H_BUMP,
    NestingViolation,
    TowerConfig,
    build_tower,
    default_generators,
    direct_sum_placement,
    h_family,
    inferior_in_fundamental_domain,
    nested_bumps_commute,
    nesting_relation,
    one_bump_structure,
    star_relation,
    sublemma_check,
    v_group,
)
from fwreath.exactnum import Interval, IntervalSet
from fwreath.plmap import bump_decomposition, commutator, interpolate, is_in_F, one_bump, support
from fwreath.prewreath import GenSet, StructureError, verify_axioms
from fwreath.report import UNRESOLVED

import pl_oracle as O


def to_o(m):
    return tuple((Fr(x), Fr(y)) for x, y in zip(m.xs, m.ys))


def bump(m):
    (b,) = bump_decomposition(m)
    return b


@pytest.fixture(scope="module")
def gens():
    return default_generators()


def test_default_generators(gens):
    h, f = gens
    assert [b.interval for b in bump_decomposition(h)] == [H_BUMP]
    assert is_in_F(h) and is_in_F(f)
    assert support(f) == IntervalSet([F_SUPPORT])


def test_h_family(gens):
    h, f = gens
    assert h_family(h, f, 0) == h
    for i in (-2, -1, 1, 2):
        want = O.comp(O.comp(O.power(to_o(f), -i), to_o(h)), O.power(to_o(f), i))
        assert to_o(h_family(h, f, i)) == want


@pytest.mark.parametrize("args,want", [((1, 2, 3, 1), True), ((1, 2, 3, 0), False), ((1, 2, 3, -2), True)])
def test_star_examples(gens, args, want):
    assert star_relation(*gens, *args) is want


def test_star_against_oracle(gens):
    h, f = (to_o(m) for m in gens)
    hi = {i: O.comp(O.comp(O.power(f, -i), h), O.power(f, i)) for i in (1, 2, 3)}

    def trivial(n):
        c = O.comp(O.comp(O.power(hi[3], -n), hi[2]), O.power(hi[3], n))
        a, b = hi[1], c
        comm = O.comp(O.comp(O.comp(O.inv(a), O.inv(b)), a), b)
        return comm == O.IDENT

    assert trivial(1) and not trivial(0)


def test_star_index_order(gens):
    with pytest.raises(ValueError):
        star_relation(*gens, 2, 1, 3, 1)


def test_one_bump_structure(gens):
    h, _ = gens
    I2 = Interval(Fr(3, 8), h(Fr(3, 8)))
    S = one_bump_structure(DEFAULT_Y0, I2, H_BUMP, F_SUPPORT, h)
    assert verify_axioms(S, 6).all_pass
    with pytest.raises(StructureError):
        one_bump_structure(DEFAULT_Y0, Interval(Fr(3, 8), Fr(1, 2)), H_BUMP, F_SUPPORT, h)
    with pytest.raises(StructureError):
        one_bump_structure(Interval(Fr(3, 8), Fr(1, 2)), I2, H_BUMP, F_SUPPORT, h)


def test_nesting_examples(gens):
    h, f = gens
    a, b = bump(h), bump(h_family(h, f, -1))
    assert nesting_relation(a, b) == "b_inferior"
    assert nesting_relation(b, a) == "a_inferior"
    assert nesting_relation(a, a) == "identical"
    left = bump(interpolate([Fr(1, 16), Fr(1, 8), Fr(3, 16)], [Fr(1, 16), Fr(5, 32), Fr(3, 16)]))
    assert nesting_relation(a, left) == "disjoint"
    assert not nested_bumps_commute(a, b)
    assert inferior_in_fundamental_domain(b, a)
    with pytest.raises(ValueError, match="not nested"):
        nested_bumps_commute(a, left)


def test_artificial_nested_pair(gens):
    h, _ = gens
    small = one_bump(interpolate([Fr(1, 2), Fr(9, 16), Fr(5, 8)], [Fr(1, 2), Fr(19, 32), Fr(5, 8)]))
    assert nesting_relation(bump(h), small) == "b_inferior"
    assert not nested_bumps_commute(bump(h), small)


def test_overlapping_bumps_raise(gens):
    h, _ = gens
    other = bump(interpolate([Fr(1, 2), Fr(5, 8), Fr(7, 8)], [Fr(1, 2), Fr(3, 4), Fr(7, 8)]))
    with pytest.raises(NestingViolation):
        nesting_relation(bump(h), other)


def test_sublemma(gens):
    h, _ = gens
    rep = sublemma_check(h, h ** 2, h ** -1, 1, 3)
    assert rep.all_pass
    assert sublemma_check(h, h, h, 0, 2).all_pass
    g = interpolate([Fr(1, 4), Fr(1, 2), Fr(3, 4)], [Fr(1, 4), Fr(9, 16), Fr(3, 4)])
    v = ~g * h * g
    bad = sublemma_check(h, v, h, 0, 1)
    assert bad.status_of("hypotheses") == UNRESOLVED
    assert "hypotheses not satisfied" in bad.checks[0].detail
    with pytest.raises(ValueError):
        sublemma_check(h, h, h, 1, 1)


def test_default_tower():
    cfg = TowerConfig.default()
    assert cfg.Y1 == Interval(Fr(7, 32), Fr(25, 32))
    assert cfg.W0 == Interval(Fr(13, 32), Fr(55, 128))
    tower = build_tower(cfg)
    assert tower.report.all_pass
    assert sorted(tower.structures) == [-2, -1, 0, 1, 2, 3]
    assert sorted(tower.h) == list(range(-3, 4))


def test_tower_depth_zero():
    tower = build_tower(TowerConfig.default(depth=0))
    assert sorted(tower.structures) == [1]


def test_tower_rejects_bad_W0():
    cfg = TowerConfig.default(W0=Interval(Fr(3, 8), Fr(5, 8)))
    assert any("meets Supp" in p for p in cfg.problems())
    with pytest.raises(StructureError):
        build_tower(cfg)


def test_v_group():
    tower = build_tower(TowerConfig.default(), verify=False)
    V, rep = v_group(tower)
    assert V.labels == ("h", "f")
    assert rep.all_pass


def test_direct_sum_placement(gens):
    h, _ = gens
    for k in (2, 4):
        D = direct_sum_placement([GenSet("A", [h], ["h"]) for _ in range(k)])
        supps = [support(g) for g in D.generators]
        for i, s in enumerate(supps, start=1):
            assert s.subset(IntervalSet([Interval(Fr(1, 2 ** (i + 1)), Fr(1, 2 ** i))]))
        for i, a in enumerate(D.generators):
            for b in D.generators[i + 1:]:
                assert commutator(a, b).is_identity()
    with pytest.raises(StructureError):
        direct_sum_placement([])
