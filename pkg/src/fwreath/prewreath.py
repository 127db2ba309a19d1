"""Pre-wreath structures ``(Z, Y, H, X)`` over ``Z = [0, 1]``.

``H`` is a finitely generated group of PL maps.  The universally quantified
axioms are checked over all group elements of word length at most a bound;
existential claims that find no witness inside the bound are reported as
UNRESOLVED rather than as failures.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactnum import Interval, IntervalSet
from .plmap import PLMap, agrees_on, image, is_identity_on, is_in_F, support
from .report import FAIL, PASS, UNRESOLVED, Report, status

__all__ = [
    "DEFAULT_CAP",
    "EnumerationCapError",
    "StructureError",
    "GenSet",
    "PreWreathStructure",
    "Carrier",
    "Letter",
    "Conjugate",
    "enumerate_words",
    "verify_axioms",
    "carrier",
    "compose_structures",
    "normal_form",
    "evaluate_letters",
    "evaluate_normal_form",
    "top_projection",
    "kernel_probe",
    "carrier_product_identity",
]

DEFAULT_CAP = 20_000


class EnumerationCapError(RuntimeError):
    """Word enumeration produced more distinct elements than the cap allows."""


class StructureError(ValueError):
    """A structure or generating set violates its construction invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class GenSet:
    """A named finite generating set of PL maps.

    ``tags`` optionally marks each generator as coming from the bottom
    (``"G"``) or top (``"H"``) group of a composed structure.
    """

    def __init__(
        self,
        name: str,
        generators: Sequence[PLMap],
        labels: Sequence[str] | None = None,
        tags: Sequence[str] | None = None,
        require_F: bool = True,
    ):
        generators = tuple(generators)
        labels = tuple(labels) if labels is not None else tuple(
            f"{name}{i}" if len(generators) > 1 else name for i in range(len(generators))
        )
        problems = []
        if not generators:
            problems.append(f"{name}: no generators (trivial group)")
        if len(labels) != len(generators):
            problems.append(f"{name}: {len(labels)} labels for {len(generators)} generators")
        if len(set(labels)) != len(labels):
            problems.append(f"{name}: duplicate labels")
        for lab, g in zip(labels, generators):
            if g.is_identity():
                problems.append(f"{name}: generator {lab} is the identity")
            if require_F and not is_in_F(g):
                problems.append(f"{name}: generator {lab} is not in F")
        if len(set(generators)) != len(generators):
            problems.append(f"{name}: duplicate generators")
        if problems:
            raise StructureError(problems)
        self.name = name
        self.generators = generators
        self.labels = labels
        self.tags = tuple(tags) if tags is not None else ("H",) * len(generators)
        self._inverses = tuple(~g for g in generators)

    def __len__(self):
        return len(self.generators)

    def letter(self, code: int) -> PLMap:
        return self.generators[code - 1] if code > 0 else self._inverses[-code - 1]

    def word_map(self, word: Sequence[int]) -> PLMap:
        m = PLMap.identity()
        for code in word:
            m = m * self.letter(code)
        return m

    def letters(self, word: Sequence[int]) -> list["Letter"]:
        out = []
        for code in word:
            k = abs(code) - 1
            name = self.labels[k] if code > 0 else self.labels[k] + "^-1"
            out.append(Letter(self.tags[k], name, self.letter(code)))
        return out

    def render(self, word: Sequence[int]) -> str:
        if not word:
            return "1"
        return " ".join(
            self.labels[abs(c) - 1] + ("" if c > 0 else "^-1") for c in word
        )

    def parse_word(self, text: str) -> tuple[int, ...]:
        out = []
        for tok in text.split():
            if tok == "1":
                continue
            inv = tok.endswith("^-1")
            lab = tok[:-3] if inv else tok
            if lab not in self.labels:
                raise ValueError(f"unknown generator {lab!r} in {self.name}")
            k = self.labels.index(lab) + 1
            out.append(-k if inv else k)
        return tuple(out)

    def support(self) -> IntervalSet:
        s = IntervalSet()
        for g in self.generators:
            s = s | support(g)
        return s

    def union(self, other: "GenSet", name: str | None = None) -> "GenSet":
        return GenSet(
            name or f"<{self.name},{other.name}>",
            self.generators + other.generators,
            self.labels + other.labels,
            self.tags + other.tags,
        )

    def retag(self, tag: str) -> "GenSet":
        return GenSet(self.name, self.generators, self.labels, (tag,) * len(self))

    def __repr__(self):
        return f"GenSet({self.name!r}, {list(self.labels)})"


def enumerate_words(H: GenSet, bound: int, cap: int = DEFAULT_CAP) -> list[tuple[tuple, PLMap]]:
    """All elements of word length at most ``bound``, with a shortest word each.

    Breadth-first over reduced words in shortlex order; a word whose map was
    already seen is not extended.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    codes = [k for i in range(1, len(H) + 1) for k in (i, -i)]
    ident = PLMap.identity()
    seen = {ident: ()}
    out = [((), ident)]
    frontier = [((), ident)]
    for _ in range(bound):
        nxt = []
        for word, m in frontier:
            last = word[-1] if word else 0
            for c in codes:
                if c == -last:
                    continue
                m2 = m * H.letter(c)
                if m2 in seen:
                    continue
                w2 = word + (c,)
                seen[m2] = w2
                out.append((w2, m2))
                nxt.append((w2, m2))
                if len(out) > cap:
                    raise EnumerationCapError(
                        f"more than {cap} distinct elements of {H.name} at length {len(w2)}"
                    )
        frontier = nxt
    return out


class PreWreathStructure:
    """The quadruple ``([0,1], Y, H, X)``.

    Items (1)-(3) of the definition are enforced here; items (4) and (5)
    quantify over the whole group and are checked by :func:`verify_axioms`.
    """

    def __init__(self, Y: IntervalSet, X: IntervalSet, H: GenSet, name: str = ""):
        Y, X = _as_set(Y), _as_set(X)
        problems = []
        if not Y.subset(IntervalSet.unit()):
            problems.append(f"Y={Y} is not inside [0,1]")
        if not H.support().subset(Y):
            problems.append(f"Supp({H.name})={H.support()} is not inside Y={Y}")
        if X.is_empty():
            problems.append("X is empty")
        elif not X.subset(Y):
            problems.append(f"X={X} is not inside Y={Y}")
        if problems:
            raise StructureError(problems)
        self.Y = Y
        self.X = X
        self.H = H
        self.name = name or H.name

    def __repr__(self):
        return f"PreWreathStructure(Y={self.Y}, X={self.X}, H={self.H.name})"


def _as_set(s) -> IntervalSet:
    if isinstance(s, IntervalSet):
        return s
    if isinstance(s, Interval):
        return IntervalSet([s])
    return IntervalSet(s)


def verify_axioms(
    S: PreWreathStructure,
    bound: int,
    cap: int = DEFAULT_CAP,
    elements: list | None = None,
) -> Report:
    """Check the five pre-wreath axioms over words of length <= ``bound``."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    elems = elements if elements is not None else enumerate_words(S.H, bound, cap)
    rep = Report(f"pre-wreath axioms for {S.name} at bound {bound}")
    rep.add("axiom1", PASS, "generators are PL homeomorphisms of [0,1]")
    rep.add("axiom2", status(S.H.support().subset(S.Y)), f"Supp(H)={S.H.support()} Y={S.Y}")
    rep.add("axiom3", status(not S.X.is_empty() and S.X.subset(S.Y)), f"X={S.X}")

    X = S.X
    images = [image(m, X) for _, m in elems]
    bad = None
    for (word, m), Xh in zip(elems, images):
        if Xh.intersects(X) and not is_identity_on(m, X):
            bad = word
            break
    if bad is None:
        rep.add("axiom4", PASS, f"{len(elems)} elements")
    else:
        rep.add("axiom4", FAIL, "Xh meets X but h|X != 1", S.H.render(bad))

    missing = None
    for word, m in elems:
        if m.is_identity():
            continue
        for (_, j), Xj in zip(elems, images):
            if image(m, Xj) != Xj:
                break
        else:
            missing = word
            break
    if missing is None:
        rep.add("axiom5", PASS, f"{len(elems) - 1} non-identity elements")
    else:
        rep.add(
            "axiom5",
            UNRESOLVED,
            f"unresolved at bound {bound}: no j found with Xjh != Xj",
            S.H.render(missing),
        )
    return rep


@dataclass
class Carrier:
    """The distinct images ``Xh`` with a producing word for each."""

    sets: tuple
    witnesses: tuple
    report: Report

    def union(self) -> IntervalSet:
        out = IntervalSet()
        for s in self.sets:
            out = out | s
        return out

    def index(self, s: IntervalSet) -> int:
        return self.sets.index(s)

    def __len__(self):
        return len(self.sets)


def _pairwise_disjoint(sets: Sequence[IntervalSet]):
    tagged = sorted(
        ((p.lo, p.hi, k) for k, s in enumerate(sets) for p in s.parts),
        key=lambda t: (t[0], t[1]),
    )
    for (lo0, hi0, k0), (lo1, hi1, k1) in zip(tagged, tagged[1:]):
        if lo1 <= hi0:
            return k0, k1
    return None


def carrier(
    S: PreWreathStructure,
    bound: int,
    cap: int = DEFAULT_CAP,
    elements: list | None = None,
    max_sets_f: int | None = None,
) -> Carrier:
    """The carrier ``XH`` truncated at ``bound``, with the basic facts about it
    checked as far as the truncation allows."""
    elems = elements if elements is not None else enumerate_words(S.H, bound, cap)
    H = S.H
    sets, witnesses, index = [], [], {}
    for word, m in elems:
        Xh = image(m, S.X)
        if Xh not in index:
            index[Xh] = len(sets)
            sets.append(Xh)
            witnesses.append(word)
    rep = Report(f"carrier of {S.name} at bound {bound}")

    clash = _pairwise_disjoint(sets)
    if clash is None and all(not s.is_empty() and s.subset(S.Y) for s in sets):
        rep.add("fact_a", PASS, f"{len(sets)} pairwise disjoint non-empty sets in Y")
    else:
        k0, k1 = clash if clash else (0, 0)
        rep.add(
            "fact_a",
            FAIL,
            "carrier sets intersect",
            f"{H.render(witnesses[k0])} / {H.render(witnesses[k1])}",
        )
    rep.add("fact_b", status(S.X in index), "X is a carrier set")

    open_end = None
    for s, w in zip(sets, witnesses):
        if len(w) >= bound:
            continue
        for c in range(1, len(H) + 1):
            for code in (c, -c):
                if image(H.letter(code), s) not in index:
                    open_end = (w, code)
    if open_end is None:
        rep.add("fact_c", PASS, "carrier closed under generators below the bound")
    else:
        w, code = open_end
        rep.add("fact_c", FAIL, "image of a carrier set is not a carrier set",
                H.render(w + (code,)))

    unmoved = None
    for word, m in elems:
        if m.is_identity():
            continue
        if all(image(m, s) == s for s in sets):
            unmoved = word
            break
    if unmoved is None:
        rep.add("fact_d", PASS, "every non-identity element moves a carrier set")
    else:
        rep.add("fact_d", UNRESOLVED, f"unresolved at bound {bound}", H.render(unmoved))

    maps = {w: m for w, m in elems}
    bad = None
    for s, w in zip(sets, witnesses):
        for t, v in zip(sets, witnesses):
            mover = ~maps[w] * maps[v]
            if image(mover, s) != t:
                bad = (w, v)
                break
        if bad or len(sets) > 64:
            # pairwise witness check is quadratic; rows beyond the first are sampled
            break
    if bad is None:
        rep.add("fact_e", PASS, "w_A^-1 w_B carries A to B")
    else:
        rep.add("fact_e", FAIL, "transitivity witness fails", f"{H.render(bad[0])} -> {H.render(bad[1])}")

    bad_f = None
    for s, w in list(zip(sets, witnesses))[: max_sets_f or len(sets)]:
        buckets = {}
        for word, m in elems:
            key = image(m, s)
            ref = buckets.get(key)
            if ref is None:
                buckets[key] = (word, m)
            elif not agrees_on(ref[1], m, s):
                bad_f = (ref[0], word)
                break
        if bad_f:
            break
    if bad_f is None:
        rep.add("fact_f", PASS, "Ah = Ak implies h|A = k|A")
    else:
        rep.add("fact_f", FAIL, "Ah = Ak but restrictions differ",
                f"{H.render(bad_f[0])} / {H.render(bad_f[1])}")
    return Carrier(tuple(sets), tuple(witnesses), rep)


def compose_structures(outer: PreWreathStructure, inner: PreWreathStructure) -> PreWreathStructure:
    """``(Z,Y,H,X)`` and ``(Z,X,G,W)`` give ``(Z, Y, <G,H>, W)``.

    Generators of ``inner`` are tagged ``G`` and those of ``outer`` ``H``.
    The result still has to be run through :func:`verify_axioms`.
    """
    if inner.Y != outer.X:
        raise StructureError([f"chaining condition fails: inner Y={inner.Y} != outer X={outer.X}"])
    G = inner.H.retag("G")
    H = outer.H.retag("H")
    return PreWreathStructure(outer.Y, inner.X, G.union(H), name=f"<{inner.name},{outer.name}>")


Letter = namedtuple("Letter", "tag name elem")
Letter.__doc__ = "A word letter tagged 'G' (bottom group) or 'H' (top group)."

Conjugate = namedtuple("Conjugate", "letter by")
Conjugate.__doc__ = "The element ``p^-1 g p`` where ``p`` is the product of ``by``."


def evaluate_letters(letters: Iterable[Letter], identity):
    m = identity
    for l in letters:
        m = m * l.elem
    return m


def normal_form(word: Sequence[Letter]) -> tuple[list[Letter], list[Conjugate]]:
    """Push the top-group letters to the left.

    Returns the ``H`` letters in their original order and, for each ``G``
    letter (left to right), that letter conjugated by the product of the
    ``H`` letters to its right.
    """
    h_letters = [l for l in word if l.tag == "H"]
    conj = []
    suffix: list[Letter] = []
    for l in reversed(word):
        if l.tag == "H":
            suffix.insert(0, l)
        elif l.tag == "G":
            conj.append(Conjugate(l, list(suffix)))
        else:
            raise ValueError(f"letter {l.name} has unknown tag {l.tag!r}")
    conj.reverse()
    return h_letters, conj


def evaluate_normal_form(nf, identity):
    h_letters, conj = nf
    m = evaluate_letters(h_letters, identity)
    for c in conj:
        p = evaluate_letters(c.by, identity)
        m = m * (~p * c.letter.elem * p)
    return m


def top_projection(word: Sequence[Letter]) -> list[Letter]:
    """Delete the ``G`` letters."""
    return [l for l in word if l.tag == "H"]


def _inverse_letters(letters: Sequence[Letter]) -> list[Letter]:
    out = []
    for l in reversed(letters):
        name = l.name[:-3] if l.name.endswith("^-1") else l.name + "^-1"
        out.append(Letter(l.tag, name, ~l.elem))
    return out


def _render_letters(letters: Sequence[Letter]) -> str:
    return " ".join(l.name for l in letters) or "1"


def kernel_probe(
    outer: PreWreathStructure,
    inner: PreWreathStructure,
    n_word: Sequence[Letter],
    bound: int,
    cap: int = DEFAULT_CAP,
) -> Report:
    """Sample the normal closure of an element of ``<G, H>`` and produce the
    witness for whichever of the two kernel cases applies.

    ``outer`` is ``(Z,Y,H,X)``; ``G`` is the group of ``inner``, supported in X.
    """
    n_map = evaluate_letters(n_word, PLMap.identity())
    if n_map.is_identity():
        raise ValueError("normal closure of the identity is trivial")
    M = inner.H.retag("G").union(outer.H.retag("H"))
    X = outer.X
    rep = Report(f"kernel probe of <<{_render_letters(n_word)}>> at bound {bound}")
    carrier_sets = carrier(outer, bound, cap, max_sets_f=1)

    samples = []
    for w, m in enumerate_words(M, bound, cap):
        letters = M.letters(w)
        samples.append(_inverse_letters(letters) + list(n_word) + letters)

    for sample in samples:
        e = evaluate_letters(sample, PLMap.identity())
        for A, u in zip(carrier_sets.sets, carrier_sets.witnesses):
            if image(e, A) != A:
                u_letters = outer.H.retag("H").letters(u)
                f_letters = u_letters + sample + _inverse_letters(u_letters)
                f = evaluate_letters(f_letters, PLMap.identity())
                Xf = image(f, X)
                rep.add("case", PASS, "I: an element of N permutes XH nontrivially")
                rep.add("moves_X", status(not Xf.intersects(X)), f"Xf={Xf} X={X}",
                        _render_letters(f_letters))
                for g, lab in zip(inner.H.generators, inner.H.labels):
                    c = ~f * ~g * f * g
                    ok = (
                        agrees_on(c, g, X)
                        and support(c).subset(X | Xf)
                        and agrees_on(c, ~f * ~g * f, Xf)
                    )
                    rep.add(f"commutator_{lab}", status(ok),
                            "f^-1 g^-1 f g restricts to g on X")
                rep.add("surjects_onto_G", status(rep.ok),
                        "generated subgroup of N restricts onto G on X")
                return rep

    rep.add("case", PASS, "II: no sampled element of N permutes the truncated carrier")
    ident = PLMap.identity()
    leaking = None
    for sample in samples:
        if not evaluate_letters(top_projection(sample), ident).is_identity():
            leaking = sample
            break
    if leaking is None:
        rep.add("inside_K", PASS, f"{len(samples)} sampled elements project trivially to H")
        rep.add("quotient_onto_H", PASS, "projection fixes every H generator and kills N")
    else:
        rep.add("inside_K", UNRESOLVED,
                f"unresolved at bound {bound}: element projects nontrivially",
                _render_letters(leaking))
    return rep


def carrier_product_identity(chain: Sequence[PreWreathStructure], bound: int,
                             cap: int = DEFAULT_CAP) -> Report:
    """Compare the carrier of an iterated composition with products of carriers.

    ``chain`` runs from the outermost structure to the innermost one, each
    satisfying ``chain[i+1].Y == chain[i].X``.  The set of images ``W w`` for
    words ``w`` of length <= ``bound`` in the composed group must equal the set
    of images ``W g_inner ... g_outer`` whose word lengths sum to <= ``bound``.
    """
    composed = chain[0]
    for inner in chain[1:]:
        composed = compose_structures(composed, inner)
    W = chain[-1].X
    from_words = {image(m, W) for _, m in enumerate_words(composed.H, bound, cap)}

    layer = {W: 0}
    for S in reversed(chain):
        elems = enumerate_words(S.H, bound, cap)
        nxt = {}
        for A, cost in layer.items():
            for w, m in elems:
                c = cost + len(w)
                if c > bound:
                    continue
                B = image(m, A)
                if nxt.get(B, bound + 1) > c:
                    nxt[B] = c
        layer = nxt
    from_products = set(layer)
    rep = Report(f"carrier product identity for {composed.name} at bound {bound}")
    rep.add("words_in_products", status(from_words <= from_products),
            f"{len(from_words)} word images")
    rep.add("products_in_words", status(from_products <= from_words),
            f"{len(from_products)} product images")
    return rep
