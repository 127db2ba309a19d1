"""A deliberately naive PL oracle on plain Fractions.

Maps are tuples of breakpoints ``((x0, y0), ..., (xn, yn))``. Composition
evaluates on the union of breakpoint preimages and drops collinear points.
No code is shared with the package.
"""

from fractions import Fraction as Fr


def ev(m, x):
    for (x0, y0), (x1, y1) in zip(m, m[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise ValueError(x)


def inv(m):
    return tuple((y, x) for x, y in m)


def _clean(pts):
    out = [pts[0]]
    for p, q in zip(pts[1:], pts[2:] + [None]):
        if q is not None:
            (x0, y0), (x1, y1), (x2, y2) = out[-1], p, q
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
                continue
        out.append(p)
    return tuple(out)


def comp(a, b):
    """``x -> b(a(x))``."""
    xs = {x for x, _ in a} | {ev(inv(a), x) for x, _ in b}
    return _clean([(x, ev(b, ev(a, x))) for x in sorted(xs)])


def from_pairs(xs, ys):
    return _clean([(Fr(0), Fr(0))] + [(Fr(x), Fr(y)) for x, y in zip(xs, ys)] + [(Fr(1), Fr(1))])


IDENT = ((Fr(0), Fr(0)), (Fr(1), Fr(1)))


def ball(gens, bound):
    """Distinct elements of word length at most ``bound``."""
    letters = list(gens) + [inv(g) for g in gens]
    seen = {IDENT}
    layer = {IDENT}
    for _ in range(bound):
        layer = {comp(w, g) for w in layer for g in letters} - seen
        seen |= layer
    return seen


def power(m, n):
    out = IDENT
    step = m if n >= 0 else inv(m)
    for _ in range(abs(n)):
        out = comp(out, step)
    return out
