import pytest

from fwreath.classify import (
    HypothesisError,
    Node,
    Ordinal,
    OrdinalRangeError,
    TreeParseError,
    class_of,
    ledger_table,
    mainthm_ledger,
    nonlimit_cover_check,
    ord_cmp,
    ord_succ,
    parse_tree,
    smallest_limit_above,
)

OMEGA = Ordinal(0, 1, 0)


def cls(text):
    return class_of(parse_tree(text))


def test_ordinal_basics():
    assert smallest_limit_above(Ordinal(0, 0, 0)) == OMEGA
    assert smallest_limit_above(Ordinal(0, 1, 2)) == Ordinal(0, 2, 0)
    assert ord_cmp(Ordinal(1, 0, 1), Ordinal(0, 5, 9)) == 1
    assert ord_succ(OMEGA) == Ordinal(0, 1, 1)
    assert str(Ordinal(1, 0, 1)) == "ω²+1"
    assert str(Ordinal(0, 3, 2)) == "3ω+2"
    assert Ordinal.parse("3ω+2") == Ordinal(0, 3, 2)
    assert OMEGA.is_limit and not Ordinal(0, 1, 1).is_limit


def test_ordinal_range():
    with pytest.raises(OrdinalRangeError):
        Ordinal(1, 0, 2) + 1


def test_class_examples():
    z = cls("Z")
    assert z.ordinal == Ordinal(0, 0, 0) and z.sigma
    w = cls("wreath(Z, Z)")
    assert w.ordinal == Ordinal(0, 0, 1) and w.sigma
    assert cls("M(Z)").ordinal == Ordinal(0, 1, 1)
    assert not cls("M(Z)").fg
    assert cls("V(Z)").ordinal == Ordinal(0, 1, 2)
    assert cls("V(V(Z))").ordinal == Ordinal(0, 2, 2)
    assert cls("square(V(Z))").ordinal == Ordinal(0, 1, 2)
    assert cls("finite(4)").ordinal == Ordinal(0, 0, 0)


def test_upper_bounds_flagged():
    r = cls("ext(Z, Z)")
    assert not r.exact and "upper bound" in r.label()
    assert cls("directsum(Z, V(Z))").exact is False
    assert cls("directsum(Z, Z)").exact


def test_unbounded_direct_sum():
    assert cls("directsum(Z, V(Z), V(V(Z)), …unbounded)").ordinal == Ordinal(1, 0, 1)
    assert cls("directsum(Z, V(Z), V(V(Z)), ...)").ordinal == Ordinal(1, 0, 1)


@pytest.mark.parametrize("text", ["wreath(finite(2))", "wreath(Z, V(Z))", "wreath(M(Z))",
                                  "sigma(finite(3))", "union(Z, Z)"])
def test_hypothesis_errors(text):
    with pytest.raises(HypothesisError):
        cls(text)


@pytest.mark.parametrize("text", ["wreath(Z", "Q", "V()", "V(Z) Z"])
def test_parse_errors(text):
    with pytest.raises(TreeParseError):
        parse_tree(text)


def test_mainthm_ledger():
    rows = mainthm_ledger(3)
    assert rows[1] == ("G1", Ordinal(0, 1, 2))
    assert rows[3] == ("G3", Ordinal(0, 3, 2))
    assert rows[-1][1] == Ordinal(1, 0, 1)
    table = ledger_table(rows)
    assert table.splitlines()[-1].endswith("ω²+1")


def test_nonlimit_cover():
    rep = nonlimit_cover_check(2)
    assert rep.all_pass
    by_name = {c.name: c for c in rep.checks}
    assert by_name["cover.2"].witness == "wreath(wreath(Z))"
    assert by_name["cover.ω+1"].witness == "M(Z)"
    assert "excluded" in by_name["cover.ω"].detail


def test_tree_round_trip():
    t = Node("V", (Node("Z"),))
    assert parse_tree(str(t)) == t
