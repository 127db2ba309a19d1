from itertools import product

import pytest

from fwreath.permoracle import (
    BlockInstance,
    ClosureCapError,
    FinitePermGroup,
    Permutation,
    closure,
    cyclic,
    independence_of_b1,
    kernel_control_finite,
    normal_form_finite,
    similarity_check,
    top_hom_finite,
    wreath_product,
)
from fwreath.report import FAIL


def brute_wreath_order(nA, gA, nB, hB):
    """Count ``(f, h)`` pairs with ``f: B -> G``; independent of the library."""
    return gA ** nB * hB


def test_permutation_text():
    p = Permutation.parse("0→2,1→0,2→1")
    assert str(p) == "0→2,1→0,2→1"
    assert Permutation.parse("0->1,1->0") == Permutation.from_cycles(2, (0, 1))
    # right action: p * q applies p first
    q = Permutation.from_cycles(3, (0, 1))
    assert (p * q)(0) == q(p(0))


def test_closure_examples():
    assert closure(cyclic(3)).order == 3
    s3 = closure(FinitePermGroup(3, [Permutation.from_cycles(3, (0, 1)),
                                     Permutation.from_cycles(3, (1, 2))]))
    assert s3.order == 6
    assert closure(FinitePermGroup(3, [])).order == 1
    with pytest.raises(ClosureCapError):
        closure(FinitePermGroup(6, [Permutation.from_cycles(6, (0, 1)),
                                    Permutation.from_cycles(6, (0, 1, 2, 3, 4, 5))]), cap=100)


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2)])
def test_wreath_orders(a, b):
    wp = wreath_product(cyclic(a), cyclic(b))
    assert len(wp.group.elements) == brute_wreath_order(a, a, b, b)


def test_wreath_trivial_G():
    wp = wreath_product(closure(FinitePermGroup(1, [])), cyclic(3))
    assert len(wp.group.elements) == 3


def test_wreath_needs_transitive_H():
    H = closure(FinitePermGroup(3, [Permutation.from_cycles(3, (0, 1))]))
    with pytest.raises(ValueError):
        wreath_product(cyclic(2), H)


def test_prime_and_star_act_as_stated():
    wp = wreath_product(cyclic(2), cyclic(3))
    g, h = wp.g_primes[0], wp.h_stars[0]
    for a, b in product(range(2), range(3)):
        ga, gb = wp.pair(g(wp.point(a, b)))
        assert (ga, gb) == (((a + 1) % 2, b) if b == 0 else (a, b))
        assert wp.pair(h(wp.point(a, b))) == (a, (b + 1) % 3)


def test_b1_independence():
    assert independence_of_b1(cyclic(2), cyclic(2))
    assert independence_of_b1(cyclic(2), cyclic(3))
    assert independence_of_b1(cyclic(2), closure(FinitePermGroup(1, [])))


def test_similarity_instances():
    main = similarity_check(BlockInstance.blocks(2, 3, [0, 1]))
    assert main.all_pass
    assert "24" in [c.detail for c in main.checks if c.name == "orders_agree"][0]
    assert similarity_check(BlockInstance.blocks(3, 2, [0, 1, 2])).all_pass


def test_similarity_rejects_axiom4_violation():
    rep = similarity_check(BlockInstance.blocks(2, 3, [0, 1], W=(0, 1)))
    assert rep.status_of("inner.axiom4") == FAIL
    assert [c.witness for c in rep.checks if c.name == "inner.axiom4"][0]


@pytest.mark.parametrize("a,b,kernel", [(2, 2, 4), (2, 3, 8)])
def test_top_hom(a, b, kernel):
    rep = top_hom_finite(wreath_product(cyclic(a), cyclic(b)))
    assert rep.all_pass
    assert str(kernel) in [c.detail for c in rep.checks if c.name == "kernel_order"][0]


def test_kernel_control_cases():
    wp = wreath_product(cyclic(2), cyclic(2))
    g, h = wp.g_primes[0], wp.h_stars[0]
    one = kernel_control_finite(wp, h)
    two = kernel_control_finite(wp, g * (~h * g * h))
    assert one.all_pass and one.checks[0].detail.startswith("I:")
    assert two.all_pass and two.checks[0].detail.startswith("II:")
    with pytest.raises(ValueError):
        kernel_control_finite(wp, h * ~h)


def test_normal_form_finite_seeded():
    wp = wreath_product(cyclic(2), cyclic(3))
    a = normal_form_finite(wp, 100, 8, seed=7)
    assert a.all_pass
    assert a.text() == normal_form_finite(wp, 100, 8, seed=7).text()
