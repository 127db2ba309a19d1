"""Ordinals below omega^2 + 3 and an elementary-class calculator for
construction trees.

The class rules are taken as given: a tree node checks the structural
flags its rule needs (finitely generated, transitive, infinite, property
Sigma) and then applies the rule.  Nothing here re-proves them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

from .report import FAIL, PASS, Report

__all__ = [
    "Ordinal",
    "OrdinalRangeError",
    "HypothesisError",
    "TreeParseError",
    "Node",
    "ClassResult",
    "ord_succ",
    "ord_cmp",
    "smallest_limit_above",
    "class_of",
    "parse_tree",
    "mainthm_ledger",
    "nonlimit_cover_check",
    "ledger_table",
]


class OrdinalRangeError(ArithmeticError):
    """Result would exceed omega^2 + 2."""


class HypothesisError(ValueError):
    """A class rule was applied to a node lacking a required flag."""


class TreeParseError(ValueError):
    def __init__(self, msg: str, pos: int = -1):
        self.pos = pos
        super().__init__(f"{msg} at offset {pos}" if pos >= 0 else msg)


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``c2*w^2 + c1*w + c0`` with ``c2`` in {0, 1}."""

    c2: int = 0
    c1: int = 0
    c0: int = 0

    def __post_init__(self):
        if self.c2 not in (0, 1) or self.c1 < 0 or self.c0 < 0:
            raise OrdinalRangeError(f"unrepresentable ordinal ({self.c2},{self.c1},{self.c0})")

    def _key(self):
        return (self.c2, self.c1, self.c0)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._key() < other._key()

    @property
    def is_limit(self) -> bool:
        return self.c0 == 0 and (self.c1 > 0 or self.c2 > 0)

    def __add__(self, k: int) -> "Ordinal":
        if not isinstance(k, int):
            return NotImplemented
        return _checked(Ordinal(self.c2, self.c1, self.c0 + k))

    def __str__(self):
        terms = []
        if self.c2:
            terms.append("ω²")
        if self.c1:
            terms.append("ω" if self.c1 == 1 else f"{self.c1}ω")
        if self.c0 or not terms:
            terms.append(str(self.c0))
        return "+".join(terms)

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        s = text.replace(" ", "").replace("w^2", "ω²").replace("w", "ω")
        c2 = c1 = c0 = 0
        for term in filter(None, s.split("+")):
            if term == "ω²":
                c2 = 1
            elif term.endswith("ω"):
                c1 = int(term[:-1] or 1)
            else:
                c0 = int(term)
        return cls(c2, c1, c0)


TOP = Ordinal(1, 0, 2)
OMEGA_SQUARED = Ordinal(1, 0, 0)


def _checked(a: Ordinal) -> Ordinal:
    if (a.c2 == 1 and a.c1 > 0) or a > TOP:
        raise OrdinalRangeError(f"{a} exceeds {TOP}")
    return a


def ord_succ(a: Ordinal) -> Ordinal:
    return a + 1


def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    return (a > b) - (a < b)


def smallest_limit_above(a: Ordinal) -> Ordinal:
    if a.c2:
        raise OrdinalRangeError(f"no representable limit ordinal above {a}")
    return Ordinal(0, a.c1 + 1, 0)


@dataclass(frozen=True)
class Node:
    kind: str
    children: tuple = ()
    order: int | None = None
    unbounded: bool = False

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "finite":
            return f"finite({self.order})"
        kids = self.children
        if self.kind == "wreath" and len(kids) == 2 and kids[0] == kids[1]:
            kids = kids[:1]
        args = [str(c) for c in kids]
        if self.unbounded:
            args.append("…unbounded")
        return f"{self.kind}({', '.join(args)})"


@dataclass(frozen=True)
class ClassResult:
    ordinal: Ordinal
    sigma: bool
    fg: bool
    transitive: bool = False
    infinite: bool = True
    exact: bool = True

    def label(self) -> str:
        return str(self.ordinal) + ("" if self.exact else " (upper bound)")


def _need(node: Node, child: ClassResult, *flags: str):
    names = {"fg": "finitely generated", "transitive": "transitive",
             "infinite": "countably infinite", "sigma": "property Σ"}
    for fl in flags:
        if not getattr(child, fl):
            raise HypothesisError(f"{node.kind} needs a child that is {names[fl]}")
    if not child.exact:
        raise HypothesisError(f"{node.kind} needs an exact class, got an upper bound")


def _limit_of(classes: list[Ordinal]) -> Ordinal:
    """Limit of an unbounded increasing sequence from a displayed prefix."""
    if len(classes) < 2 or any(a >= b for a, b in zip(classes, classes[1:])):
        raise HypothesisError("an unbounded sequence needs at least two strictly increasing classes")
    a, b = classes[-2], classes[-1]
    if b.c2:
        raise OrdinalRangeError(f"limit above {b} is not representable")
    if b.c1 > a.c1:
        return OMEGA_SQUARED
    return Ordinal(0, b.c1 + 1, 0)


def class_of(node: Node, _memo: dict | None = None) -> ClassResult:
    memo = {} if _memo is None else _memo
    if node in memo:
        return memo[node]
    kids = [class_of(c, memo) for c in node.children]
    k = node.kind
    if k == "Z":
        res = ClassResult(Ordinal(), sigma=True, fg=True, transitive=True)
    elif k == "finite":
        res = ClassResult(Ordinal(), sigma=False, fg=True, transitive=True, infinite=False)
    elif k == "square":
        c = kids[0]
        res = ClassResult(c.ordinal, c.sigma, c.fg, c.transitive, c.infinite, c.exact)
    elif k == "sigma":
        c = kids[0]
        _need(node, c, "sigma")
        res = ClassResult(c.ordinal, True, False, False, c.infinite)
    elif k == "wreath":
        if len(node.children) == 2 and node.children[0] != node.children[1]:
            raise HypothesisError("wreath rule needs two copies of the same group")
        c = kids[0]
        _need(node, c, "fg", "transitive", "infinite", "sigma")
        res = ClassResult(ord_succ(c.ordinal), True, True, True)
    elif k in ("M", "V"):
        c = kids[0]
        _need(node, c, "fg", "transitive", "infinite", "sigma")
        beta = smallest_limit_above(c.ordinal)
        if k == "M":
            res = ClassResult(beta + 1, True, False, False)
        else:
            res = ClassResult(beta + 2, True, True, True)
    elif k == "extension":
        top = max(c.ordinal for c in kids)
        res = ClassResult(top + 1, False, all(c.fg for c in kids), False,
                          any(c.infinite for c in kids), exact=False)
    elif k in ("union", "directsum"):
        if node.unbounded:
            beta = _limit_of([c.ordinal for c in kids])
            res = ClassResult(beta + 1, False, False, False)
        elif k == "union":
            raise HypothesisError("a union needs an unbounded sequence of groups")
        elif len(set(node.children)) == 1:
            c = kids[0]
            res = ClassResult(c.ordinal, c.sigma, c.fg, c.transitive, c.infinite, c.exact)
        else:
            top = max(c.ordinal for c in kids)
            res = ClassResult(top + 1, False, all(c.fg for c in kids), False,
                              any(c.infinite for c in kids), exact=False)
    else:
        raise HypothesisError(f"unknown node kind {k!r}")
    memo[node] = res
    return res


_KINDS = {
    "Z": "Z", "finite": "finite", "square": "square", "sigma": "sigma", "Σ": "sigma",
    "wreath": "wreath", "ext": "extension", "extension": "extension", "union": "union",
    "M": "M", "V": "V", "directsum": "directsum",
}
_ARITY = {"square": 1, "sigma": 1, "M": 1, "V": 1, "wreath": (1, 2), "extension": 2}
_TOKEN = re.compile(r"\s*(?:(?P<marker>(?:…|\.\.\.)\s*(?:unbounded)?|unbounded)|(?P<name>[A-Za-zΣ]+)|(?P<num>\d+)|(?P<sym>[(),]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TreeParseError(f"unexpected character {text[pos:].strip()[:1]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_tree(text: str) -> Node:
    """Parse e.g. ``directsum(Z, V(Z), V(V(Z)), …unbounded)``.

    Whitespace, including newlines and indentation, is insignificant.
    """
    toks = _tokens(text)
    i = 0

    def expect(sym):
        nonlocal i
        kind, val, pos = toks[i]
        if val != sym:
            raise TreeParseError(f"expected {sym!r}, found {val or 'end of input'!r}", pos)
        i += 1

    def node() -> Node:
        nonlocal i
        kind, val, pos = toks[i]
        if kind != "name" or val not in _KINDS:
            raise TreeParseError(f"expected a node name, found {val or 'end of input'!r}", pos)
        i += 1
        k = _KINDS[val]
        if k == "Z":
            return Node("Z")
        expect("(")
        if k == "finite":
            kind, val, pos = toks[i]
            if kind != "num" or int(val) < 1:
                raise TreeParseError("finite(n) needs a positive order", pos)
            i += 1
            expect(")")
            return Node("finite", order=int(val))
        children, unbounded = [], False
        while True:
            kind, val, pos = toks[i]
            if kind == "marker":
                unbounded = True
                i += 1
            else:
                if unbounded:
                    raise TreeParseError("the unbounded marker must come last", pos)
                children.append(node())
            kind, val, pos = toks[i]
            if val == ",":
                i += 1
                continue
            expect(")")
            break
        arity = _ARITY.get(k)
        n = len(children)
        if arity is not None and n not in (arity if isinstance(arity, tuple) else (arity,)):
            raise TreeParseError(f"{k} takes {arity} argument(s), got {n}", pos)
        if unbounded and k not in ("union", "directsum"):
            raise TreeParseError(f"{k} does not take an unbounded marker", pos)
        if k == "wreath" and n == 1:
            children = children * 2
        return Node(k, tuple(children), unbounded=unbounded)

    root = node()
    if toks[i][0] != "end":
        raise TreeParseError(f"trailing input {toks[i][1]!r}", toks[i][2])
    return root


def subtrees(node: Node) -> list[Node]:
    """Distinct subtrees in post-order."""
    out, seen = [], set()

    def walk(n):
        for c in n.children:
            walk(c)
        if n not in seen:
            seen.add(n)
            out.append(n)

    walk(node)
    return out


def ledger_table(rows) -> str:
    rows = [(str(a), str(b)) for a, b in rows]
    width = max([len(a) for a, _ in rows] + [4])
    lines = [f"{'node'.ljust(width)}  class", f"{'-' * width}  -----"]
    lines += [f"{a.ljust(width)}  {b}" for a, b in rows]
    return "\n".join(lines)


def tower_sequence(k: int) -> list[Node]:
    """``G_0 = Z`` and ``G_{i+1} = V(G_i)`` for ``i < k``."""
    seq = [Node("Z")]
    for _ in range(k):
        seq.append(Node("V", (seq[-1],)))
    return seq


def mainthm_ledger(k: int) -> list[tuple[str, Ordinal]]:
    if k < 1:
        raise ValueError("k must be at least 1")
    seq = tower_sequence(k)
    rows = []
    for i, g in enumerate(seq):
        c = class_of(g).ordinal
        if i >= 1 and c != Ordinal(0, i, 2):
            raise AssertionError(f"G_{i} has class {c}, expected {i}ω+2")
        rows.append((f"G{i}", c))
    total = class_of(Node("directsum", tuple(seq), unbounded=True)).ordinal
    if total != Ordinal(1, 0, 1):
        raise AssertionError(f"unbounded direct sum has class {total}")
    rows.append((f"directsum(G0..G{k}, …unbounded)", total))
    return rows


def nonlimit_cover_check(k: int, c0_window: int = 5) -> Report:
    """Search trees grown from Z by wreath squares and the M/V steps, and report which
    non-limit ordinals ``c1*w + c0`` with ``c1 <= k`` (and ``c0 <= 2`` when
    ``c1 == k``, ``c0 <= c0_window`` otherwise) appear as classes."""
    if k < 1:
        raise ValueError("k must be at least 1")
    limit = Ordinal(0, k, 2)
    found: dict[Ordinal, Node] = {}
    frontier = [Node("Z")]
    seen = set()
    while frontier:
        nxt = []
        for t in frontier:
            r = class_of(t)
            o = r.ordinal
            if o > limit or o.c0 > c0_window or t in seen:
                continue
            seen.add(t)
            found.setdefault(o, t)
            if r.fg and r.transitive and r.infinite and r.sigma and r.exact:
                for cand in (Node("wreath", (t, t)), Node("M", (t,)), Node("V", (t,))):
                    nxt.append(cand)
        frontier = nxt
    rep = Report(f"non-limit classes up to {limit}")
    for c1 in range(k + 1):
        top = 2 if c1 == k else c0_window
        for c0 in range(top + 1):
            o = Ordinal(0, c1, c0)
            if o.is_limit:
                rep.add(f"cover.{o}", PASS, "limit ordinal, excluded")
                continue
            t = found.get(o)
            rep.add(f"cover.{o}", PASS if t else FAIL, "covered" if t else "not covered",
                    str(t) if t else "")
    return rep
