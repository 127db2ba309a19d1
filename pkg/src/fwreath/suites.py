"""Named verification suites shared by the command line and the test suite.

Each suite returns a :class:`Report`; randomized suites take an explicit seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import classify
from .constructions import (
    DEFAULT_Y0,
    F_SUPPORT,
    H_BUMP,
    Tower,
    TowerConfig,
    build_tower,
    default_generators,
    nesting_suite,
    one_bump_structure,
    star_relation,
    sublemma_check,
    v_group,
    wreath_decomposition_check,
)
from .crossval import cross_validate
from .exactnum import Dyadic, Interval
from .permoracle import (
    BlockInstance,
    cyclic,
    independence_of_b1,
    kernel_control_finite,
    normal_form_finite,
    similarity_check,
    top_hom_finite,
    wreath_product,
)
from .plmap import PLMap, conjugate, interpolate, is_in_F
from .prewreath import (
    compose_structures,
    evaluate_letters,
    evaluate_normal_form,
    normal_form,
    top_projection,
    verify_axioms,
)
from .report import Report, status

__all__ = ["SUITES", "run_suite"]


def star_suite(h: PLMap | None = None, f: PLMap | None = None, top: int = 4, nmax: int = 3) -> Report:
    if h is None:
        h, f = default_generators()
    rep = Report(f"relation (*) for 1 <= i<j<k <= {top}, |n| <= {nmax}")
    for i in range(1, top + 1):
        for j in range(i + 1, top + 1):
            for k in range(j + 1, top + 1):
                for n in range(-nmax, nmax + 1):
                    got = star_relation(h, f, i, j, k, n)
                    rep.add(f"star.{i}.{j}.{k}.{n}", status(got == (n != 0)),
                            f"commutator {'trivial' if got else 'nontrivial'}")
    return rep


def default_one_bump():
    h, _ = default_generators()
    I2 = Interval(Fraction(3, 8), h(Dyadic(3, 3)))
    return one_bump_structure(DEFAULT_Y0, I2, H_BUMP, F_SUPPORT, h)


def onebump_suite(bound: int = 8) -> Report:
    return verify_axioms(default_one_bump(), bound)


def similarity_suite() -> Report:
    rep = Report("finite similarity instances")
    rep.extend(similarity_check(BlockInstance.blocks(2, 3, [0, 1])), "blocks2x3.")
    rep.extend(similarity_check(BlockInstance.blocks(3, 2, [0, 1, 2])), "point_orbit3x2.")
    return rep


def two_letter_structure(tower: Tower | None = None):
    """``Z wr Z`` from tower structures 1 (outer) and 0 (inner)."""
    tower = tower or build_tower(TowerConfig.default(), verify=False)
    return compose_structures(tower.structures[1], tower.structures[0])


def random_pl_words(S, count: int, max_len: int, seed: int):
    rng = random.Random(seed)
    n = len(S.H)
    for _ in range(count):
        L = rng.randint(0, max_len)
        word = tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(L))
        yield word


def normal_form_suite(seed: int = 0, count: int = 500, max_len: int = 8) -> Report:
    S = two_letter_structure()
    ident = PLMap.identity()
    bad = None
    for word in random_pl_words(S, count, max_len, seed):
        letters = S.H.letters(word)
        if evaluate_normal_form(normal_form(letters), ident) != S.H.word_map(word):
            bad = word
            break
    rep = Report(f"normal form, seed {seed}")
    rep.add("pl.normal_form", status(bad is None), f"{count} words of length <= {max_len} in {S.name}",
            S.H.render(bad) if bad else "")
    rep.extend(normal_form_finite(wreath_product(cyclic(2), cyclic(3)), count, max_len, seed), "finite.")
    return rep


def top_projection_suite(seed: int = 0, count: int = 200, max_len: int = 6) -> Report:
    """Deletion of bottom letters is multiplicative on PL words."""
    S = two_letter_structure()
    ident = PLMap.identity()
    words = list(random_pl_words(S, 2 * count, max_len, seed))
    ok = True
    for w1, w2 in zip(words[::2], words[1::2]):
        l1, l2 = S.H.letters(w1), S.H.letters(w2)
        lhs = evaluate_letters(top_projection(l1 + l2), ident)
        rhs = evaluate_letters(top_projection(l1), ident) * evaluate_letters(top_projection(l2), ident)
        ok = ok and lhs == rhs
    rep = Report(f"top projection on PL words, seed {seed}")
    rep.add("pl.multiplicative", status(ok), f"{count} word pairs")
    return rep


def top_hom_suite() -> Report:
    rep = Report("top projection on finite wreath products")
    for name, (a, b) in (("Z2wrZ2", (2, 2)), ("Z2wrZ3", (2, 3))):
        wp = wreath_product(cyclic(a), cyclic(b))
        rep.extend(top_hom_finite(wp), f"{name}.")
        rep.add(f"{name}.b1_independent", status(independence_of_b1(cyclic(a), cyclic(b))))
    return rep


def kernel_control_suite() -> Report:
    wp = wreath_product(cyclic(2), cyclic(2))
    g, h = wp.g_primes[0], wp.h_stars[0]
    rep = Report("kernel control on Z2 wr Z2")
    one = kernel_control_finite(wp, h)
    two = kernel_control_finite(wp, g * (~h * g * h))
    rep.extend(one, "h_star.")
    rep.extend(two, "g_prime_product.")
    rep.add("cases_distinct", status(one.checks[0].detail.startswith("I:")
                                     and two.checks[0].detail.startswith("II:")))
    return rep


def class_suite() -> Report:
    rep = Report("class ledger")
    cases = [("Z", "0"), ("wreath(Z, Z)", "1"), ("M(Z)", "ω+1"), ("V(Z)", "ω+2")]
    for text, want in cases:
        got = classify.class_of(classify.parse_tree(text)).ordinal
        rep.add(f"class.{text}", status(str(got) == want), f"{got}")
    for i, g in enumerate(classify.tower_sequence(5)):
        if i:
            got = classify.class_of(g).ordinal
            rep.add(f"class.G{i}", status(got == classify.Ordinal(0, i, 2)), f"{got}")
    tree = classify.parse_tree("directsum(Z, V(Z), V(V(Z)), …unbounded)")
    got = classify.class_of(tree).ordinal
    rep.add("class.directsum_unbounded", status(got == classify.Ordinal(1, 0, 1)), f"{got}")
    return rep


def default_nesting_suite(h: PLMap | None = None, f: PLMap | None = None, bound: int = 4) -> Report:
    if h is None:
        h, f = default_generators()
    return nesting_suite(h, f, bound=bound)


def sublemma_suite(h: PLMap | None = None) -> Report:
    rep = Report("sublemma instances")
    default_h = default_generators()[0]
    h = h or default_h
    rep.extend(sublemma_check(h, h ** 2, h ** -1, 1, 3), "powers.")
    rep.extend(sublemma_check(h, h, h, 0, 2), "v_equals_w.")
    if h != default_h:
        return rep
    # a conjugate of h by an element of F supported in the bump shares the
    # bump interval but does not commute with h
    g = interpolate([Dyadic(1, 2), Dyadic(1, 1), Dyadic(3, 2)], [Dyadic(1, 2), Dyadic(9, 4), Dyadic(3, 2)])
    v = conjugate(h, g)
    rep.extend(sublemma_check(h, v, h, 0, 1), "hypotheses_fail.")
    return rep


def _random_dyadics(rng: random.Random, k: int, depth: int = 6) -> list:
    pool = set()
    while len(pool) < k:
        e = rng.randint(1, depth)
        pool.add(Dyadic(rng.randrange(1, 1 << e), e))
    return sorted(pool)


def random_F_element(rng: random.Random, max_points: int = 6) -> PLMap:
    k = rng.randint(1, max_points)
    return interpolate(_random_dyadics(rng, k), _random_dyadics(rng, k))


def f_closure_suite(seed: int = 0, count: int = 1000) -> Report:
    rng = random.Random(seed)
    elems = [random_F_element(rng) for _ in range(count)]
    base = all(is_in_F(m) for m in elems)
    comp = all(is_in_F(a * b) for a, b in zip(elems, elems[1:] + elems[:1]))
    inv = all(is_in_F(~m) for m in elems)
    rep = Report(f"F closure on {count} random interpolants, seed {seed}")
    rep.add("interpolants_in_F", status(base))
    rep.add("compose_in_F", status(comp))
    rep.add("invert_in_F", status(inv))
    return rep


def crossval_suite(tower: Tower | None = None) -> Report:
    tower = tower or build_tower(TowerConfig.default(), verify=False)
    S = tower.structures
    rep = Report("PL carrier actions against the wreath formulas")
    rep.extend(cross_validate([S[1]], name="shift"), "shift.")
    rep.extend(cross_validate([S[1], S[0]], name="ZwrZ"), "ZwrZ.")
    rep.extend(cross_validate([S[1], S[0], S[-1]], name="ZwrZwrZ"), "ZwrZwrZ.")
    return rep


def tower_suite(config: TowerConfig | None = None) -> Report:
    tower = build_tower(config or TowerConfig.default())
    rep = Report("tower")
    rep.extend(tower.report)
    rep.extend(wreath_decomposition_check(tower, 0), "M_wreath.")
    _, vrep = v_group(tower)
    rep.extend(vrep)
    return rep


SUITES = {
    "star": lambda seed: star_suite(),
    "onebump": lambda seed: onebump_suite(),
    "similarity": lambda seed: similarity_suite(),
    "normalform": lambda seed: normal_form_suite(seed),
    "tophom": lambda seed: top_hom_suite(),
    "kernel": lambda seed: kernel_control_suite(),
    "class": lambda seed: class_suite(),
    "nesting": lambda seed: default_nesting_suite(),
    "sublemma": lambda seed: sublemma_suite(),
    "fclosure": lambda seed: f_closure_suite(seed),
    "crossval": lambda seed: crossval_suite(),
    "tower": lambda seed: tower_suite(),
}


def run_suite(name: str, seed: int = 0) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](seed)
