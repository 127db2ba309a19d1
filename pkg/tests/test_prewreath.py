from fractions import Fraction as Fr

import pytest

from fwreath.constructions import TowerConfig, build_tower, default_generators
from fwreath.exactnum import IntervalSet
from fwreath.plmap import PLMap, image
from fwreath.prewreath import (
    GenSet,
    PreWreathStructure,
    StructureError,
    carrier,
    carrier_product_identity,
    compose_structures,
    enumerate_words,
    evaluate_letters,
    evaluate_normal_form,
    kernel_probe,
    normal_form,
    top_projection,
    verify_axioms,
)
from fwreath.report import FAIL, PASS, UNRESOLVED

import pl_oracle as O


@pytest.fixture(scope="module")
def tower():
    return build_tower(TowerConfig.default(), verify=False)


@pytest.fixture(scope="module")
def composed(tower):
    return compose_structures(tower.structures[1], tower.structures[0])


def h_set():
    h, _ = default_generators()
    return GenSet("H", [h], ["h"])


def test_enumerate_small_bounds():
    H = h_set()
    assert [w for w, _ in enumerate_words(H, 0)] == [()]
    h = H.generators[0]
    maps = {m for _, m in enumerate_words(H, 2)}
    assert maps == {PLMap.identity(), h, ~h, h ** 2, h ** -2}


def test_enumerate_default_pair_matches_oracle():
    h, f = default_generators()
    words = enumerate_words(GenSet("V", [h, f], ["h", "f"]), 3)
    # 53 was computed with the Fraction oracle in pl_oracle.ball
    assert len(words) == 53
    to_o = lambda m: tuple((Fr(x), Fr(y)) for x, y in zip(m.xs, m.ys))
    assert len(O.ball([to_o(h), to_o(f)], 3)) == 53


def test_genset_rejects_bad_generators():
    with pytest.raises(StructureError):
        GenSet("E", [])
    with pytest.raises(StructureError):
        GenSet("I", [PLMap.identity()])


def test_structure_constructor_checks():
    H = h_set()
    with pytest.raises(StructureError):
        PreWreathStructure(IntervalSet.parse("[3/8,5/8]"), IntervalSet.parse("[7/16,1/2]"), H)
    with pytest.raises(StructureError):
        PreWreathStructure(IntervalSet.parse("[1/8,7/8]"), IntervalSet.parse("[0,1/2]"), H)


def test_axiom4_fails_on_whole_bump():
    H = h_set()
    S = PreWreathStructure(IntervalSet.parse("[1/8,7/8]"), IntervalSet.parse("[1/4,3/4]"), H)
    rep = verify_axioms(S, 3)
    assert rep.status_of("axiom4") == FAIL
    assert "h" in [c.witness for c in rep.checks if c.name == "axiom4"][0]


def test_axioms_pass_in_fundamental_domain():
    H = h_set()
    S = PreWreathStructure(IntervalSet.parse("[1/8,7/8]"), IntervalSet.parse("[33/64,41/64]"), H)
    assert verify_axioms(S, 4).all_pass


def test_carrier_one_bump():
    H = h_set()
    S = PreWreathStructure(IntervalSet.parse("[1/8,7/8]"), IntervalSet.parse("[33/64,41/64]"), H)
    c = carrier(S, 2)
    assert len(c.sets) == 5 and c.report.all_pass
    h = H.generators[0]
    assert set(c.sets) == {image(h ** n, S.X) for n in range(-2, 3)}
    assert list(carrier(S, 0).sets) == [S.X]


def test_compose_requires_chaining(tower):
    with pytest.raises(StructureError):
        compose_structures(tower.structures[1], tower.structures[-1])


def test_composed_structure_axioms(composed):
    rep = verify_axioms(composed, 4)
    assert rep.ok
    assert rep.status_of("axiom4") == PASS


def test_carrier_is_product_of_carriers(tower):
    rep = carrier_product_identity([tower.structures[1], tower.structures[0]], 3)
    assert rep.all_pass


def test_normal_form_examples(composed):
    G_code, H_code = 1, 2  # h-1 is tagged G, h0 is tagged H
    (hl,) = composed.H.letters((H_code,))
    (gl,) = composed.H.letters((G_code,))
    assert normal_form([hl]) == ([hl], [])
    hs, conj = normal_form([gl])
    assert hs == [] and conj[0].letter == gl and conj[0].by == []
    word = composed.H.letters((H_code, G_code, H_code))
    hs, conj = normal_form(word)
    assert [l.name for l in hs] == ["h0", "h0"]
    assert [l.name for l in conj[0].by] == ["h0"]
    ident = PLMap.identity()
    assert evaluate_normal_form((hs, conj), ident) == evaluate_letters(word, ident)


def test_top_projection(composed):
    pure_h = composed.H.letters((2, -2, 2))
    assert top_projection(pure_h) == pure_h
    assert top_projection(composed.H.letters((1, -1, 1))) == []


def test_kernel_probe_cases(tower, composed):
    o, i = tower.structures[1], tower.structures[0]
    one = kernel_probe(o, i, composed.H.letters((2,)), 4)
    assert one.checks[0].detail.startswith("I:") and one.all_pass
    two = kernel_probe(o, i, composed.H.letters((1,)), 4)
    assert two.checks[0].detail.startswith("II:") and two.all_pass
    with pytest.raises(ValueError):
        kernel_probe(o, i, composed.H.letters((1, -1)), 4)


def test_unresolved_is_not_failure():
    H = h_set()
    S = PreWreathStructure(IntervalSet.parse("[1/8,7/8]"), IntervalSet.parse("[1/4,3/4]"), H)
    rep = verify_axioms(S, 2)
    assert rep.status_of("axiom5") in (PASS, UNRESOLVED)
