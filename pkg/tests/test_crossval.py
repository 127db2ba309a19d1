import pytest

from fwreath.constructions import TowerConfig, build_tower
from fwreath.crossval import cross_validate, flatten, nest, oracle_act
from fwreath.report import FAIL


@pytest.fixture(scope="module")
def S():
    return build_tower(TowerConfig.default(), verify=False).structures


def test_nest_round_trip():
    for exps in [(), (3,), (1, -2), (0, 4, -1)]:
        assert flatten(nest(exps)) == exps


def test_oracle_top_letter_shifts_outer_index():
    pt = nest((5, 7))
    assert flatten(oracle_act(pt, 1, 1, 2)) == (5, 8)
    # inner letter moves the inner index only in the base fibre
    assert flatten(oracle_act(nest((5, 0)), 0, 1, 2)) == (6, 0)
    assert flatten(oracle_act(nest((5, 3)), 0, 1, 2)) == (5, 3)


def test_shift_and_two_level(S):
    assert cross_validate([S[1]]).all_pass
    assert cross_validate([S[1], S[0]]).all_pass


def test_wrong_base_fibre_is_detected(S):
    rep = cross_validate([S[1], S[0]], b1=1)
    assert rep.status_of("actions_agree") == FAIL


def test_chaining_required(S):
    with pytest.raises(ValueError):
        cross_validate([S[1], S[-1]])
