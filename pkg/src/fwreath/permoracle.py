"""Brute-force finite permutation groups and the permutation wreath product.

Everything acts on the right: ``p * (a * b) == (p * a) * b``.  Points of a
product ``A x B`` are pairs ``(a, b)``; the wreath product is generated by

* ``g'`` : ``(a, b) -> (a g, b)`` when ``b == b1``, fixed otherwise
* ``h*`` : ``(a, b) -> (a, b h)``.

These two formulas are also exposed as :func:`prime_image` and
:func:`star_image` so other code can apply them to infinite index sets.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .prewreath import Letter, evaluate_letters, evaluate_normal_form, normal_form
from .report import PASS, Report, status

DEFAULT_CAP = 10_000


class ClosureCapError(RuntimeError):
    pass


class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored as its image list."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Read ``"0→2,1→0,2→1"`` (``->`` also accepted)."""
        pairs = {}
        for chunk in text.replace("->", "→").split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            a, _, b = chunk.partition("→")
            pairs[int(a)] = int(b)
        return cls(pairs.get(i, i) for i in range(max(pairs) + 1 if pairs else 0))

    def __len__(self):
        return len(self.images)

    def __call__(self, p: int) -> int:
        return self.images[p]

    def __mul__(self, other: "Permutation") -> "Permutation":
        o = other.images
        return Permutation._raw(tuple(o[i] for i in self.images))

    def __invert__(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else ~self
        out = Permutation.identity(len(self))
        for _ in range(abs(k)):
            out = out * base
        return out

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        return p

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def support(self) -> frozenset:
        return frozenset(i for i, j in enumerate(self.images) if i != j)

    def image_set(self, s: Iterable[int]) -> frozenset:
        return frozenset(self.images[i] for i in s)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self})"

    def __str__(self):
        return ",".join(f"{i}→{j}" for i, j in enumerate(self.images))


@dataclass
class FinitePermGroup:
    n: int
    generators: list
    elements: frozenset | None = None

    @property
    def order(self) -> int:
        if self.elements is None:
            raise ValueError("group not materialized; call closure() first")
        return len(self.elements)

    def identity(self) -> Permutation:
        return Permutation.identity(self.n)


def closure(G: FinitePermGroup, cap: int = DEFAULT_CAP) -> FinitePermGroup:
    """Breadth-first closure of the generators (a finite group is closed
    under products alone)."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    e = G.identity()
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = x * g
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ClosureCapError(f"closure exceeds {cap} elements")
                queue.append(y)
    return FinitePermGroup(G.n, list(G.generators), frozenset(seen))


def shortest_words(G: FinitePermGroup, cap: int = DEFAULT_CAP) -> dict:
    """A shortest word (tuple of generator indices) for every element."""
    e = G.identity()
    words = {e: ()}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for k, g in enumerate(G.generators):
            y = x * g
            if y not in words:
                words[y] = words[x] + (k,)
                if len(words) > cap:
                    raise ClosureCapError(f"closure exceeds {cap} elements")
                queue.append(y)
    return words


def orbit(gens: Sequence[Permutation], start: Hashable, act=None) -> set:
    act = act or (lambda p, g: g(p))
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = act(p, g)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def is_transitive(H: FinitePermGroup) -> bool:
    return H.n == 0 or len(orbit(H.generators, 0)) == H.n


def prime_image(point: tuple, act_g: Callable, b1) -> tuple:
    """``(a, b) g'``: move ``a`` by ``g`` in the ``b1`` fibre only."""
    a, b = point
    return (act_g(a), b) if b == b1 else point


def star_image(point: tuple, act_h: Callable) -> tuple:
    """``(a, b) h*``: move the fibre index by ``h``."""
    a, b = point
    return (a, act_h(b))


@dataclass
class WreathProduct:
    """``G wr H`` on ``A x B`` with ``(a, b)`` stored as index ``b*|A| + a``."""

    G: FinitePermGroup
    H: FinitePermGroup
    b1: int
    group: FinitePermGroup
    g_primes: list
    h_stars: list
    labels: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    @property
    def nA(self) -> int:
        return self.G.n

    @property
    def nB(self) -> int:
        return self.H.n

    def point(self, a: int, b: int) -> int:
        return b * self.nA + a

    def pair(self, p: int) -> tuple:
        return p % self.nA, p // self.nA

    def block(self, b: int) -> frozenset:
        return frozenset(self.point(a, b) for a in range(self.nA))

    def block_action(self, x: Permutation) -> Permutation:
        """The permutation of ``B`` induced on the fibres ``A x {b}``."""
        return Permutation(self.pair(x(self.point(0, b)))[1] for b in range(self.nB))

    def letters(self, word: Sequence[int]) -> list:
        gens = self.group.generators
        return [Letter(self.tags[k], self.labels[k], gens[k]) for k in word]


def wreath_product(G: FinitePermGroup, H: FinitePermGroup, b1: int = 0,
                   cap: int = DEFAULT_CAP) -> WreathProduct:
    if not is_transitive(H):
        raise ValueError("H must act transitively on B")
    if not 0 <= b1 < H.n:
        raise ValueError(f"b1={b1} outside B")
    nA, nB = G.n, H.n

    def lift(fn):
        imgs = [0] * (nA * nB)
        for b in range(nB):
            for a in range(nA):
                a2, b2 = fn((a, b))
                imgs[b * nA + a] = b2 * nA + a2
        return Permutation(imgs)

    g_primes = [lift(lambda pt, g=g: prime_image(pt, g, b1)) for g in G.generators]
    h_stars = [lift(lambda pt, h=h: star_image(pt, h)) for h in H.generators]
    grp = closure(FinitePermGroup(nA * nB, g_primes + h_stars), cap)
    labels = [f"g{k}'" for k in range(len(g_primes))] + [f"h{k}*" for k in range(len(h_stars))]
    tags = ["G"] * len(g_primes) + ["H"] * len(h_stars)
    return WreathProduct(G, H, b1, grp, g_primes, h_stars, labels, tags)


def independence_of_b1(G: FinitePermGroup, H: FinitePermGroup, cap: int = DEFAULT_CAP) -> bool:
    groups = {wreath_product(G, H, b1, cap).group.elements for b1 in range(H.n)}
    return len(groups) == 1


def cyclic(n: int) -> FinitePermGroup:
    """``Z_n`` acting regularly on ``n`` points."""
    if n == 1:
        return FinitePermGroup(1, [])
    return FinitePermGroup(n, [Permutation([(i + 1) % n for i in range(n)])])


@dataclass
class BlockInstance:
    """A finite pre-wreath situation on ``{0..n-1}``.

    ``H`` permutes the images of ``X``; ``G`` is supported in ``X`` and
    permutes the images of ``W``.
    """

    n: int
    X: frozenset
    W: frozenset
    G: list
    H: list

    @classmethod
    def blocks(cls, size: int, count: int, g_cycle: Sequence[int], W: Iterable[int] = (0,)):
        """``count`` blocks of ``size`` points; ``G`` cycles ``g_cycle`` inside
        block 0 and ``H`` rotates the blocks."""
        n = size * count
        g = Permutation.from_cycles(n, list(g_cycle))
        h = Permutation([(i + size) % n for i in range(n)])
        return cls(n, frozenset(range(size)), frozenset(W), [g], [h])


def _finite_axioms(n, Y, X, gens, name) -> Report:
    rep = Report(f"finite axioms for {name}")
    grp = closure(FinitePermGroup(n, list(gens)))
    supp = frozenset().union(*(g.support() for g in grp.elements))
    rep.add(f"{name}.axiom1", status(grp.order > 1), f"order {grp.order}")
    rep.add(f"{name}.axiom2", status(supp <= Y))
    rep.add(f"{name}.axiom3", status(bool(X) and X <= Y))
    bad4 = next((x for x in grp.elements
                 if x.image_set(X) & X and any(x(p) != p for p in X)), None)
    rep.add(f"{name}.axiom4", status(bad4 is None), "", str(bad4) if bad4 else "")
    bad5 = next((x for x in grp.elements if not x.is_identity()
                 and all(x.image_set(j.image_set(X)) == j.image_set(X) for j in grp.elements)), None)
    rep.add(f"{name}.axiom5", status(bad5 is None), "", str(bad5) if bad5 else "")
    return rep


def similarity_check(inst: BlockInstance, cap: int = DEFAULT_CAP) -> Report:
    """Check that ``<G, H>`` on the carrier ``W<G,H>`` is similar to
    ``G wr H`` on ``WG x XH`` via ``t: (Wg, Xh) -> Wgh``."""
    rep = Report("similarity of <G,H> with G wr H")
    full = frozenset(range(inst.n))
    rep.extend(_finite_axioms(inst.n, full, inst.X, inst.H, "outer"))
    rep.extend(_finite_axioms(inst.n, inst.X, inst.W, inst.G, "inner"))
    if not rep.ok:
        return rep

    Gc = closure(FinitePermGroup(inst.n, inst.G), cap)
    Hc = closure(FinitePermGroup(inst.n, inst.H), cap)
    A = sorted({g.image_set(inst.W) for g in Gc.elements}, key=sorted)
    B = sorted({h.image_set(inst.X) for h in Hc.elements}, key=sorted)
    # representatives: one element carrying W (resp. X) to each set
    rep_g = {g.image_set(inst.W): g for g in sorted(Gc.elements, key=lambda p: p.images)}
    rep_h = {h.image_set(inst.X): h for h in sorted(Hc.elements, key=lambda p: p.images)}
    t = {(i, j): (rep_g[a] * rep_h[b]).image_set(inst.W)
         for i, a in enumerate(A) for j, b in enumerate(B)}
    both = closure(FinitePermGroup(inst.n, inst.G + inst.H), cap)
    carrier = {x.image_set(inst.W) for x in both.elements}
    rep.add("t_bijective", status(len(set(t.values())) == len(t) and set(t.values()) == carrier),
            f"|WG|={len(A)} |XH|={len(B)} |W<G,H>|={len(carrier)}")
    inv_t = {v: k for k, v in t.items()}
    b1 = B.index(inst.X)

    def act_set(sets, x):
        return lambda i: sets.index(x.image_set(sets[i]))

    ok_g = all(
        inv_t[g.image_set(t[pt])] == prime_image(pt, act_set(A, g), b1)
        for g in inst.G for pt in t
    )
    ok_h = all(
        inv_t[h.image_set(t[pt])] == star_image(pt, act_set(B, h))
        for h in inst.H for pt in t
    )
    rep.add("conjugates_g_to_g_prime", status(ok_g), "t^-1 g t = g'")
    rep.add("conjugates_h_to_h_star", status(ok_h), "t^-1 h t = h*")

    Gbar = FinitePermGroup(len(A), [Permutation(act_set(A, g)(i) for i in range(len(A))) for g in inst.G])
    Hbar = FinitePermGroup(len(B), [Permutation(act_set(B, h)(i) for i in range(len(B))) for h in inst.H])
    wp = wreath_product(Gbar, Hbar, b1, cap)
    induced = closure(FinitePermGroup(len(carrier), [
        Permutation(sorted(carrier, key=sorted).index(x.image_set(s)) for s in sorted(carrier, key=sorted))
        for x in inst.G + inst.H
    ]), cap)
    rep.add("orders_agree", status(induced.order == wp.group.order),
            f"|<G,H>|={both.order} on points, {induced.order} on the carrier; "
            f"|G wr H|={wp.group.order}")
    return rep


def projection_words(wp: WreathProduct) -> dict:
    """For each element, the ``H``-letters of a shortest word evaluated in ``H*``."""
    words = shortest_words(FinitePermGroup(wp.group.n, wp.group.generators))
    e = wp.group.identity()
    out = {}
    for x, w in words.items():
        top = [l for l in wp.letters(w) if l.tag == "H"]
        out[x] = evaluate_letters(top, e)
    return out


def top_hom_finite(wp: WreathProduct) -> Report:
    """The letter-deletion map onto ``H*`` is a well-defined homomorphism
    whose kernel is generated by the ``H*``-conjugates of the ``g'``."""
    rep = Report(f"top projection on G wr H of order {wp.group.order}")
    proj = projection_words(wp)
    elems = list(wp.group.elements)
    # well defined: agrees with the action on fibres, which is intrinsic
    Hstar = closure(FinitePermGroup(wp.group.n, wp.h_stars))
    wd = all(wp.block_action(proj[x]) == wp.block_action(x) and proj[x] in Hstar.elements for x in elems)
    rep.add("well_defined", status(wd), "deleting G letters gives the fibre permutation")
    hom = all(proj[x * y] == proj[x] * proj[y] for x in elems for y in elems)
    rep.add("homomorphism", status(hom), f"{len(elems) ** 2} pairs")
    rep.add("identity_on_H", status(all(proj[h] == h for h in Hstar.elements)))
    kernel = frozenset(x for x in elems if proj[x].is_identity())
    conj = [~h * g * h for h in Hstar.elements for g in wp.g_primes]
    K = closure(FinitePermGroup(wp.group.n, conj)).elements
    rep.add("kernel_is_K", status(kernel == K), f"|ker|={len(kernel)} |K|={len(K)}")
    expected = wp.group.order // Hstar.order
    rep.add("kernel_order", status(len(kernel) == expected), f"|G|^|B| = {expected}")
    return rep


def normal_closure(wp: WreathProduct, n: Permutation) -> frozenset:
    conj = {~x * n * x for x in wp.group.elements}
    return closure(FinitePermGroup(wp.group.n, sorted(conj, key=lambda p: p.images))).elements


def kernel_control_finite(wp: WreathProduct, normal_gen: Permutation) -> Report:
    """Witness for the case that applies to the normal closure ``N``:
    (I) some element of ``N`` moves the fibre ``b1``, and commutators with it
    restrict onto ``G`` there; (II) ``N`` fixes every fibre, and ``G wr H / N``
    still maps onto ``H``."""
    if normal_gen.is_identity():
        raise ValueError("normal closure of the identity is trivial")
    rep = Report("kernel control")
    N = normal_closure(wp, normal_gen)
    X = wp.block(wp.b1)
    movers = sorted((x for x in N if x.image_set(X) != X), key=lambda p: p.images)
    if movers:
        f = movers[0]
        rep.add("case", PASS, "I: N moves the fibre b1", str(f))
        rep.add("fibre_moved_off", status(not (f.image_set(X) & X)))
        comms = [~f * ~g * f * g for g in wp.g_primes]
        rep.add("commutators_in_N", status(all(c in N for c in comms)))
        C = closure(FinitePermGroup(wp.group.n, comms)).elements
        stable = all(c.image_set(X) == X for c in C)
        restricted = {Permutation(wp.pair(c(wp.point(a, wp.b1)))[0] for a in range(wp.nA)) for c in C}
        Gc = closure(wp.G).elements
        rep.add("restriction_onto_G", status(stable and restricted == set(Gc)),
                f"{len(C)} elements restrict onto |G|={len(Gc)}")
        return rep
    rep.add("case", PASS, "II: N fixes every fibre")
    proj = projection_words(wp)
    cosets_ok = all(proj[x * n] == proj[x] for x in wp.group.elements for n in N)
    rep.add("N_in_kernel", status(all(proj[n].is_identity() for n in N)))
    rep.add("quotient_well_defined", status(cosets_ok), f"{len(wp.group.elements) // len(N)} cosets")
    Hstar = closure(FinitePermGroup(wp.group.n, wp.h_stars)).elements
    rep.add("quotient_onto_H", status(set(proj.values()) == set(Hstar)), f"|H|={len(Hstar)}")
    return rep


def random_word(rng: random.Random, ngens: int, max_len: int) -> tuple:
    return tuple(rng.randrange(ngens) for _ in range(rng.randint(0, max_len)))


def normal_form_finite(wp: WreathProduct, count: int, max_len: int, seed: int = 0) -> Report:
    """Evaluate random words and their pushed-left normal forms in ``G wr H``."""
    rng = random.Random(seed)
    gens = wp.group.generators
    e = wp.group.identity()
    inverses = [~g for g in gens]
    bad = None
    for _ in range(count):
        word = random_word(rng, 2 * len(gens), max_len)
        letters = []
        for code in word:
            k, inv = divmod(code, 2)
            elem = inverses[k] if inv else gens[k]
            letters.append(Letter(wp.tags[k], wp.labels[k] + ("^-1" if inv else ""), elem))
        if evaluate_normal_form(normal_form(letters), e) != evaluate_letters(letters, e):
            bad = " ".join(l.name for l in letters)
            break
    rep = Report(f"normal form on {count} random words in G wr H")
    rep.add("normal_form", status(bad is None), f"seed {seed}", bad or "")
    return rep
