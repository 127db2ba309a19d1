"""Compare PL carrier actions with the permutation wreath product formulas.

A chain of cyclic pre-wreath structures, outermost first, each with one
generator ``g_k``, gives carrier sets ``W g_0^n_0 g_1^n_1 ... `` indexed by
integer tuples (innermost exponent first).  On the index side a letter acts
by the iterated ``g'`` / ``h*`` formulas with base fibre 0 at every level.
Both sides must agree letter by letter on a finite window.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .exactnum import IntervalSet
from .permoracle import prime_image, star_image
from .plmap import PLMap, image
from .prewreath import PreWreathStructure, enumerate_words, GenSet
from .report import Report, status

__all__ = ["nest", "flatten", "oracle_act", "cross_validate"]


def nest(exps: Sequence[int]):
    """``(n0, n1, n2)`` -> ``((((), n0), n1), n2)``."""
    pt = ()
    for n in exps:
        pt = (pt, n)
    return pt


def flatten(pt) -> tuple:
    out = []
    while pt != ():
        pt, n = pt
        out.append(n)
    return tuple(reversed(out))


def oracle_act(pt, level: int, sign: int, depth: int, b1: int = 0):
    """Apply ``g_level^sign`` to a nested index point of the given depth."""
    if level == depth - 1:
        return star_image(pt, lambda b: b + sign)
    return prime_image(pt, lambda a: oracle_act(a, level, sign, depth - 1, b1), b1)


def cross_validate(chain: Sequence[PreWreathStructure], radius: int = 2,
                   word_bound: int = 3, name: str = "", b1: int = 0) -> Report:
    """``b1`` is the base fibre index on the oracle side; only 0 matches the
    labelling ``t``, other values serve as a negative control."""
    # chain runs outermost first; every group must have one generator
    if any(len(S.H) != 1 for S in chain):
        raise ValueError("cross validation expects cyclic groups")
    for outer, inner in zip(chain, chain[1:]):
        if inner.Y != outer.X:
            raise ValueError(f"chaining condition fails between {outer.name} and {inner.name}")
    gens = [S.H.generators[0] for S in reversed(chain)]  # innermost first
    depth = len(gens)
    W = chain[-1].X
    powers = [{n: g ** n for n in range(-radius - word_bound, radius + word_bound + 1)} for g in gens]

    def t(exps) -> IntervalSet:
        m = PLMap.identity()
        for k, n in enumerate(exps):
            m = m * (powers[k][n] if n in powers[k] else gens[k] ** n)
        return image(m, W)

    points = list(product(range(-radius, radius + 1), repeat=depth))
    sets = {p: t(p) for p in points}
    rep = Report(f"cross validation {name or '/'.join(S.name for S in chain)} radius {radius}")
    rep.add("t_injective", status(len(set(sets.values())) == len(points)),
            f"{len(points)} index points")

    letters = GenSet("chain", gens, [f"g{k}" for k in range(depth)], require_F=False)
    words = enumerate_words(letters, word_bound)
    mismatch = None
    for word, m in words:
        for p in points:
            q = nest(p)
            for code in word:
                q = oracle_act(q, abs(code) - 1, 1 if code > 0 else -1, depth, b1)
            if image(m, sets[p]) != t(flatten(q)):
                mismatch = (word, p)
                break
        if mismatch:
            break
    rep.add("actions_agree", status(mismatch is None),
            f"{len(words)} words x {len(points)} points",
            f"{letters.render(mismatch[0])} at {mismatch[1]}" if mismatch else "")
    return rep
