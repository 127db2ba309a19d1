"""Explicit subgroups of F built from the generators ``h`` and ``f``.

The conjugation tower uses ``h_i = f^-i h f^i`` and is checked at finite
truncations. Bump nesting and direct-sum placement live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import ONE, ZERO, Dyadic, Interval, IntervalSet, exact, is_dyadic, render_exact
from .plmap import (
    Bump,
    PLMap,
    bump_decomposition,
    commutator,
    conjugate,
    fundamental_domain,
    image,
    interpolate,
    one_bump,
    support,
)
from .prewreath import (
    DEFAULT_CAP,
    GenSet,
    PreWreathStructure,
    StructureError,
    enumerate_words,
    evaluate_letters,
    evaluate_normal_form,
    normal_form,
    verify_axioms,
)
from .report import FAIL, PASS, UNRESOLVED, Report, status

__all__ = [
    "default_generators",
    "one_bump_structure",
    "h_family",
    "star_relation",
    "NestingViolation",
    "nesting_relation",
    "nested_bumps_commute",
    "inferior_in_fundamental_domain",
    "nesting_suite",
    "sublemma_check",
    "TowerConfig",
    "Tower",
    "build_tower",
    "find_W0",
    "v_group",
    "direct_sum_placement",
]

H_BUMP = Interval(Fraction(1, 4), Fraction(3, 4))
F_SUPPORT = Interval(Fraction(1, 8), Fraction(7, 8))
DEFAULT_Y0 = Interval(Fraction(13, 32), Fraction(19, 32))


def _d(text: str) -> Dyadic:
    return Dyadic.from_value(text)


@lru_cache(maxsize=None)
def default_generators() -> tuple[PLMap, PLMap]:
    """The pair ``(h, f)``.

    ``h`` is one bump on [1/4, 3/4] with ``h(3/8) = 5/8``.  ``f`` fixes 1/8,
    1/2 and 7/8 and pushes points away from 1/2, so conjugating by ``f``
    spreads a bump outward and conjugating by ``f^-1`` shrinks it toward 1/2.
    """
    h = interpolate([_d("1/4"), _d("3/8"), _d("3/4")], [_d("1/4"), _d("5/8"), _d("3/4")])
    f = interpolate(
        [_d("1/8"), _d("7/16"), _d("1/2"), _d("9/16"), _d("7/8")],
        [_d("1/8"), _d("1/4"), _d("1/2"), _d("3/4"), _d("7/8")],
    )
    return h, f


def one_bump_structure(I1: Interval, I2: Interval, I3: Interval, I4: Interval,
                       h: PLMap) -> PreWreathStructure:
    """``([0,1], I4, <h>, I1)`` for a one-bump ``h`` with bump interval ``I3``
    and fundamental domain ``I2``, each interval inside the next one's interior."""
    problems = []
    for k, (a, b) in enumerate(((I1, I2), (I2, I3), (I3, I4)), start=1):
        if not a.strictly_inside(b):
            problems.append(f"I{k}={a} is not in the interior of I{k + 1}={b}")
    if not I4.subset(Interval(ZERO, ONE)):
        problems.append(f"I4={I4} is not inside [0,1]")
    bumps = bump_decomposition(h)
    if len(bumps) != 1:
        problems.append(f"h has {len(bumps)} bumps, expected one")
    else:
        b = bumps[0]
        if b.interval != I3:
            problems.append(f"bump interval of h is {b.interval}, expected I3={I3}")
        if h(I2.lo) != I2.hi and h(I2.hi) != I2.lo:
            problems.append(f"I2={I2} is not a fundamental domain of h")
    if problems:
        raise StructureError(problems)
    return PreWreathStructure(IntervalSet([I4]), IntervalSet([I1]), GenSet("h", [h]), name="<h>")


@lru_cache(maxsize=4096)
def h_family(h: PLMap, f: PLMap, i: int) -> PLMap:
    """``h_i = f^-i h f^i``."""
    if i == 0:
        return h
    # build from the neighbour so a run of indices costs one conjugation each
    if i > 0:
        return conjugate(h_family(h, f, i - 1), f)
    return conjugate(h_family(h, f, i + 1), ~f)


def star_relation(h: PLMap, f: PLMap, i: int, j: int, k: int, n: int) -> bool:
    """Whether ``[h_i, h_k^-n h_j h_k^n]`` is the identity."""
    if not 1 <= i < j < k:
        raise ValueError(f"need 1 <= i < j < k, got i={i} j={j} k={k}")
    hi, hj, hk = (h_family(h, f, t) for t in (i, j, k))
    return commutator(hi, conjugate(hj, hk ** n)).is_identity()


class NestingViolation(ValueError):
    """Two bump intervals overlap without being nested or equal."""


def nesting_relation(a: Bump, b: Bump) -> str:
    """One of ``disjoint``, ``identical``, ``a_inferior``, ``b_inferior``.

    Touching intervals count as disjoint; anything else that is not nested
    raises :class:`NestingViolation`.
    """
    A, B = a.interval, b.interval
    if A == B:
        return "identical"
    if not A.interiors_meet(B):
        return "disjoint"
    if A.strictly_inside(B):
        return "a_inferior"
    if B.strictly_inside(A):
        return "b_inferior"
    raise NestingViolation(f"bump intervals {A} and {B} overlap but are not nested")


def nested_bumps_commute(a: Bump, b: Bump) -> bool:
    rel = nesting_relation(a, b)
    if rel not in ("a_inferior", "b_inferior"):
        raise ValueError(f"bumps are not nested ({rel})")
    return commutator(a.map, b.map).is_identity()


def inferior_in_fundamental_domain(inferior: Bump, superior: Bump) -> bool:
    """Whether some fundamental domain of ``superior`` contains ``inferior``."""
    lo, hi = inferior.interval.lo, inferior.interval.hi
    c = lo if superior.direction > 0 else hi
    return inferior.interval.subset(fundamental_domain(superior, c))


def nesting_suite(h: PLMap, f: PLMap, indices: Sequence[int] = (-1, -2, -3),
                  bound: int = 4, cap: int = DEFAULT_CAP) -> Report:
    """Classify every pair of bumps among the elements of ``<h_i : i in indices>``
    of word length <= ``bound``."""
    gens = GenSet("tower", [h_family(h, f, i) for i in indices], [f"h{i}" for i in indices])
    elems = enumerate_words(gens, bound, cap)
    bumps = {}
    for word, m in elems:
        for b in bump_decomposition(m):
            bumps.setdefault(b, word)
    by_interval = {}
    for b in bumps:
        by_interval.setdefault(b.interval, []).append(b)
    intervals = sorted(by_interval)
    rep = Report(f"bump nesting among {len(elems)} elements of {gens.name} at bound {bound}")
    identical = sum(len(v) * (len(v) - 1) // 2 for v in by_interval.values())
    nested = 0
    violation = commuting = outside = None
    for x, A in enumerate(intervals):
        for B in intervals[x + 1:]:
            if B.lo >= A.hi:
                # sorted by left endpoint, so every later interval is disjoint too
                break
            try:
                rel = nesting_relation(by_interval[A][0], by_interval[B][0])
            except NestingViolation as exc:
                violation = violation or (A, B, str(exc))
                continue
            if rel == "disjoint":
                continue
            inf_list, sup_list = (by_interval[A], by_interval[B]) if rel == "a_inferior" else (
                by_interval[B], by_interval[A])
            full = True
            for bi in inf_list:
                inner = IntervalSet([bi.interval])
                for bs in sup_list:
                    nested += 1
                    # commuting maps satisfy supp(a) b = supp(a); one full
                    # commutator per interval pair backs up the cheap test
                    moved = image(bs.map, inner) != inner
                    if full:
                        moved = moved and not commutator(bi.map, bs.map).is_identity()
                        full = False
                    if commuting is None and not moved:
                        commuting = (bi, bs)
                    if outside is None and not inferior_in_fundamental_domain(bi, bs):
                        outside = (bi, bs)
    total = len(bumps) * (len(bumps) - 1) // 2
    counts = {"disjoint": total - identical - nested, "identical": identical, "nested": nested}
    detail = (f"{len(bumps)} bumps on {len(intervals)} intervals; disjoint={counts['disjoint']} "
              f"identical={counts['identical']} nested={counts['nested']}")
    if violation:
        rep.add("trichotomy", FAIL, violation[2],
                f"{gens.render(bumps[by_interval[violation[0]][0]])} / "
                f"{gens.render(bumps[by_interval[violation[1]][0]])}")
    else:
        rep.add("trichotomy", PASS, detail)
    if commuting:
        rep.add("nested_noncommute", FAIL, "nested bumps commute",
                f"{gens.render(bumps[commuting[0]])} / {gens.render(bumps[commuting[1]])}")
    else:
        rep.add("nested_noncommute", PASS, f"{counts['nested']} nested pairs")
    if outside:
        rep.add("inferior_in_domain", FAIL, "inferior bump not inside a fundamental domain",
                f"{gens.render(bumps[outside[0]])} / {gens.render(bumps[outside[1]])}")
    else:
        rep.add("inferior_in_domain", PASS, f"{counts['nested']} nested pairs")
    return rep


def _as_bump(x) -> Bump:
    return x if isinstance(x, Bump) else one_bump(x)


def sublemma_check(u, v, w, m: int, n: int) -> Report:
    """If ``w^-m v w^m`` and ``w^-n v w^n`` both commute with ``u``, then
    ``w^(n-m)`` commutes with ``v``.  ``u, v, w`` share one bump interval."""
    u, v, w = _as_bump(u), _as_bump(v), _as_bump(w)
    if not (u.interval == v.interval == w.interval):
        raise ValueError(f"bump intervals differ: {u.interval}, {v.interval}, {w.interval}")
    if m == n:
        raise ValueError("m and n must differ")
    rep = Report(f"sublemma on {u.interval} with m={m} n={n}")
    W = w.map
    hyp_m = commutator(conjugate(v.map, W ** m), u.map).is_identity()
    hyp_n = commutator(conjugate(v.map, W ** n), u.map).is_identity()
    if not (hyp_m and hyp_n):
        failed = [k for k, ok in (("m", hyp_m), ("n", hyp_n)) if not ok]
        rep.add("hypotheses", UNRESOLVED, "hypotheses not satisfied: " + ",".join(failed))
        return rep
    rep.add("hypotheses", PASS, "both conjugates commute with u")
    rep.add("conclusion", status(commutator(W ** (n - m), v.map).is_identity()),
            f"w^{n - m} commutes with v")
    return rep


def find_W0(Y0: Interval, f: PLMap, supp_H1: IntervalSet, max_halvings: int = 64) -> Interval:
    """Leftmost halving ``[Y0.lo, Y0.lo + |Y0|/2^k]`` whose ``f``-image misses ``supp_H1``."""
    length = exact(Y0.hi - Y0.lo)
    for k in range(max_halvings):
        cand = Interval(Y0.lo, exact(Y0.lo + length / (1 << k)))
        if not image(f, IntervalSet([cand])).intersects(supp_H1):
            return cand
    raise StructureError([f"no halving of Y0={Y0} has f-image avoiding Supp(H1)"])


@dataclass
class TowerConfig:
    """Inputs for the conjugation tower.

    ``H_1 = <h>``, ``Y_i = Y0 f^i``, ``H_i = <h_{i-1}>`` and ``W_i = W0 f^i``.
    ``window`` is how many consecutive ``H_i`` stand in for the infinite
    groups ``R_j`` and ``L_j``.
    """

    h: PLMap
    f: PLMap
    Y0: Interval
    Y1: Interval | None = None
    W0: Interval | None = None
    depth: int = 3
    bound: int = 4
    window: int = 2
    cap: int = DEFAULT_CAP

    @classmethod
    def default(cls, **kw) -> "TowerConfig":
        h, f = default_generators()
        return cls(h, f, DEFAULT_Y0, **kw)

    def __post_init__(self):
        if self.Y1 is None:
            self.Y1 = image(self.f, IntervalSet([self.Y0])).hull()
        if self.W0 is None:
            self.W0 = find_W0(self.Y0, self.f, support(self.h))

    def problems(self) -> list[str]:
        out = []
        if self.depth < 0:
            out.append("depth must be non-negative")
        if self.bound < 1 or self.window < 1:
            out.append("bound and window must be positive")
        Y0, Y1, W0 = (IntervalSet([v]) for v in (self.Y0, self.Y1, self.W0))
        supp = support(self.h)
        if image(self.f, Y0) != Y1:
            out.append(f"Y0 f = {image(self.f, Y0)} differs from Y1={Y1}")
        if not Y0.subset(supp):
            out.append(f"Y0={Y0} is not inside Supp(H1)={supp}")
        if not supp.subset(Y1):
            out.append(f"Supp(H1)={supp} is not inside Y1={Y1}")
        if supp == Y1:
            out.append("Supp(H1) equals Y1")
        if not W0.subset(Y0):
            out.append(f"W0={W0} is not inside Y0={Y0}")
        if image(self.f, W0).intersects(supp):
            out.append(f"W0 f = {image(self.f, W0)} meets Supp(H1)={supp}")
        return out


@dataclass
class Tower:
    config: TowerConfig
    h: dict = field(default_factory=dict)
    H: dict = field(default_factory=dict)
    Y: dict = field(default_factory=dict)
    W: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    report: Report | None = None

    def h_i(self, i: int) -> PLMap:
        return h_family(self.config.h, self.config.f, i)

    def group(self, first: int, count: int, name: str = "") -> GenSet:
        """``<H_first, ..., H_{first+count-1}>``."""
        idx = range(first, first + count)
        return GenSet(name or f"H[{first}..{first + count - 1}]",
                      [self.h_i(i - 1) for i in idx], [f"h{i - 1}" for i in idx])

    def R(self, j: int) -> GenSet:
        return self.group(j, self.config.window, f"R{j}")

    def L(self, i: int) -> GenSet:
        return self.group(i - self.config.window, self.config.window, f"L{i}")

    def Y_of(self, i: int) -> IntervalSet:
        return image(self.config.f ** i, IntervalSet([self.config.Y0]))

    def W_of(self, i: int) -> IntervalSet:
        return image(self.config.f ** i, IntervalSet([self.config.W0]))

    def verify(self) -> Report:
        cfg = self.config
        rep = Report(f"tower depth={cfg.depth} bound={cfg.bound} window={cfg.window}")
        f = cfg.f
        rec = all(self.h_i(i + 1) == conjugate(self.h_i(i), f) for i in sorted(self.h)[:-1])
        rep.add("recurrence", status(rec), "h_{i+1} = f^-1 h_i f")
        for i, S in sorted(self.structures.items()):
            rep.extend(verify_axioms(S, cfg.bound, cfg.cap), prefix=f"T{i}.")

        js = sorted(self.structures)
        carriers = {}
        for j in js + [js[-1] + 1]:
            elems = enumerate_words(self.R(j), cfg.bound, cfg.cap)
            Yc = [image(m, self.Y_of(j - 1)) for _, m in elems]
            Wc = [image(m, self.W_of(j - 1)) for _, m in elems]
            carriers[j] = (Yc, Wc)
        for j in js:
            Yc, Wc = carriers[j]
            Ynext, Wnext = carriers[j + 1]
            rep.add(f"R{j}.W_in_Y", status(all(w.subset(y) for w, y in zip(Wc, Yc))),
                    "W_{j-1} r inside Y_{j-1} r")
            union_next = _union(Ynext)
            rep.add(f"R{j}.Y_in_next", status(all(y.subset(union_next) for y in Yc)),
                    "Y_{j-1}R_j inside Y_jR_{j+1}")
            rep.add(f"R{j}.Y_misses_Wnext", status(not _union(Yc).intersects(_union(Wnext))),
                    "Y_{j-1}R_j disjoint from W_jR_{j+1}")
        unions = {j: _union(carriers[j][1]) for j in js}
        clash = [(a, b) for a in js for b in js if a < b and unions[a].intersects(unions[b])]
        rep.add("W_carriers_disjoint", status(not clash),
                f"{len(js)} truncated carriers W_(j-1)R_j", " ".join(f"{a}/{b}" for a, b in clash))
        bad_f = [
            (j, k) for k in js for j in js if j < k
            and any(s.intersects(support(self.h_i(j - 1))) for s in carriers[k][1])
        ]
        rep.add("W_carriers_miss_lower_supports", status(not bad_f),
                "sets of W_(k-1)R_k miss Supp(H_j) for j<k", " ".join(f"{j}<{k}" for j, k in bad_f))
        for j in js:
            S = PreWreathStructure(self.Y_of(j + cfg.window - 1), self.W_of(j - 1), self.R(j))
            sub = verify_axioms(S, cfg.bound, cfg.cap)
            rep.extend(sub, prefix=f"R{j}.W.")
        self.report = rep
        return rep


def _union(sets) -> IntervalSet:
    out = IntervalSet()
    for s in sets:
        out = out | s
    return out


def build_tower(config: TowerConfig, verify: bool = True) -> Tower:
    """Materialize ``h_i, H_i, Y_i, W_i`` for ``|i| <= depth`` and the
    structures ``(Y_i, H_i, Y_{i-1})`` for ``1-depth <= i <= max(depth, 1)``."""
    problems = config.problems()
    if problems:
        raise StructureError(problems)
    d = config.depth
    tower = Tower(config)
    top = max(d, 1)
    for i in range(-d, top + 1):
        tower.h[i] = tower.h_i(i)
        tower.Y[i] = tower.Y_of(i)
        tower.W[i] = tower.W_of(i)
    for i in range(-d, top + 1):
        tower.H[i] = GenSet(f"H{i}", [tower.h_i(i - 1)], [f"h{i - 1}"])
    for i in range(1 - d, top + 1):
        tower.structures[i] = PreWreathStructure(tower.Y[i], tower.Y[i - 1], tower.H[i], name=f"T{i}")
    if verify:
        tower.verify()
    return tower


def wreath_decomposition_check(tower: Tower, i: int, bound: int | None = None) -> Report:
    """Truncation evidence that ``M = L_i wr R_i``.

    Every element over a window of ``L_i`` and ``R_i`` generators splits as
    ``r k`` with ``r`` in ``R_i`` and ``k`` a product of ``L_i`` conjugates,
    each supported in a single carrier set of ``(Y_{i-1}, R_i)``, so ``k``
    fixes every carrier set.
    """
    cfg = tower.config
    bound = bound or cfg.bound
    L = tower.L(i).retag("G")
    R = tower.R(i).retag("H")
    M = L.union(R, name=f"M@{i}")
    Yprev = tower.Y_of(i - 1)
    carrier_sets = {image(m, Yprev) for _, m in enumerate_words(R, bound, cfg.cap)}
    ident = PLMap.identity()
    rep = Report(f"M = L{i} wr R{i} at bound {bound}")
    bad = {"normal_form": None, "supported": None, "fixes_carrier": None}
    elems = enumerate_words(M, bound, cfg.cap)
    for word, m in elems:
        letters = M.letters(word)
        nf = normal_form(letters)
        if bad["normal_form"] is None and evaluate_normal_form(nf, ident) != m:
            bad["normal_form"] = word
        k = ident
        for c in nf[1]:
            p = evaluate_letters(c.by, ident)
            piece = ~p * c.letter.elem * p
            if bad["supported"] is None and not support(piece).subset(image(p, Yprev)):
                bad["supported"] = word
            k = k * piece
        if bad["fixes_carrier"] is None and any(image(k, A) != A for A in carrier_sets):
            bad["fixes_carrier"] = word
    for name, detail in (("normal_form", "r k evaluates to the element"),
                         ("supported", "each L conjugate lies in one carrier set"),
                         ("fixes_carrier", "k fixes every carrier set")):
        w = bad[name]
        rep.add(name, status(w is None), f"{len(elems)} elements; truncation evidence",
                M.render(w) if w is not None else "")
    return rep


def _rewrite_f_left(word: Sequence[int]) -> tuple[int, list[int]]:
    """Write a word over ``(h, f)`` as ``f^n w``; ``w`` lists the family index
    ``t`` of each ``h_t^{+-1}`` letter, signed as ``(t, sign)`` pairs."""
    n = 0
    out = []
    # scan right to left: a letter h picks up the f-exponent to its right
    for code in reversed(word):
        if abs(code) == 2:
            n += 1 if code > 0 else -1
        else:
            out.append((n, 1 if code > 0 else -1))
    out.reverse()
    return n, out


def v_group(tower: Tower, bound: int = 5) -> tuple[GenSet, Report]:
    """``V = <h, f>`` with truncation-level checks of its descriptions and of
    the structure ``(Y_1 u Supp(f), V, W_0)``."""
    cfg = tower.config
    h, f = cfg.h, cfg.f
    V = GenSet("V", [h, f], ["h", "f"])
    rep = Report(f"V = <h, f> at bound {bound}")
    ok = all(h_family(h, f, i) == (f ** -i) * h * (f ** i) for i in range(-cfg.window - 1, cfg.window + 2))
    ok = ok and h == ~f * h_family(h, f, -1) * f
    rep.add("descriptions", status(ok), "generators of M, L1, R1 are h-conjugates by f powers; h lies in each")

    Y = tower.Y_of(1) | support(f)
    S = PreWreathStructure(Y, IntervalSet([cfg.W0]), V, name="V")
    elems = enumerate_words(V, bound, cfg.cap)
    rep.extend(verify_axioms(S, bound, cfg.cap, elements=elems), prefix="V.")

    W0 = IntervalSet([cfg.W0])
    bad = None
    for word, m in elems:
        n, w = _rewrite_f_left(word)
        # keep only letters lying in R_{n+1}, i.e. family index t >= n
        kept = PLMap.identity()
        for t, sign in w:
            if t >= n:
                kept = kept * (h_family(h, f, t) ** sign)
        if image(m, W0) != image((f ** n) * kept, W0):
            bad = word
            break
    rep.add("carrier_in_shifted_R1", status(bad is None),
            "W0 v = W0 f^n w' with w' in R_(n+1)", V.render(bad) if bad else "")

    r1 = enumerate_words(tower.group(1, cfg.window, "R1"), bound, cfg.cap)
    r1_sets = {image(m, W0) for _, m in r1}
    r1_union = _union(r1_sets)
    moved = all(
        not image(f ** n, W0).intersects(r1_union) for n in range(-bound, bound + 1) if n
    )
    rep.add("f_moves_W0_off_R1", status(moved), f"W0 f^n misses W0 R1 for 0 < |n| <= {bound}")
    return V, rep


def _dyadic_inside(x, up: bool) -> Dyadic:
    """A dyadic strictly on the ``up`` side of ``x`` in (0, 1), close to ``x``."""
    if is_dyadic(x):
        return Dyadic.from_value(x)
    k = 1
    while True:
        scaled = Fraction(x) * (1 << k)
        num = scaled.__ceil__() if up else scaled.__floor__()
        cand = Dyadic(num, k)
        if ZERO < cand < ONE:
            return cand
        k += 1


def direct_sum_placement(groups: Sequence[GenSet]) -> GenSet:
    """Conjugate group ``i`` (1-based) into ``[1/2^(i+1), 1/2^i]``.

    Each conjugator is an F element sending the hull of the group's support
    onto the middle half of its target interval.
    """
    if not groups:
        raise StructureError(["no groups to place: the direct sum would be trivial"])
    gens, labels = [], []
    for i, G in enumerate(groups, start=1):
        supp = G.support()
        if supp.lo <= ZERO or supp.hi >= ONE:
            raise StructureError([f"support of {G.name} touches the boundary of [0,1]"])
        a, b = _dyadic_inside(supp.lo, up=False), _dyadic_inside(supp.hi, up=True)
        lo, hi = Dyadic(1, i + 1), Dyadic(1, i)
        quarter = (hi - lo).shift(-2)
        phi = interpolate([a, b], [lo + quarter, hi - quarter])
        for g, lab in zip(G.generators, G.labels):
            gens.append(conjugate(g, phi))
            labels.append(f"{G.name}{i}.{lab}")
    return GenSet("sum", gens, labels)


def render_interval(iv: Interval) -> str:
    return f"[{render_exact(iv.lo)},{render_exact(iv.hi)}]"
