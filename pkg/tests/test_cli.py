import json
from pathlib import Path

import pytest

from fwreath.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    out = tmp_path_factory.mktemp("build")
    assert main(["build", str(FIXTURES / "tower.ini"), "--out", str(out)]) == 0
    return out


def test_build_manifest(built):
    manifest = json.loads((built / "manifest.json").read_text())
    assert sorted(manifest["maps"]) == sorted(["h", "f"] + [f"h_{i}" for i in range(-3, 4)])
    assert sorted(manifest["structures"]) == sorted(f"T{i}" for i in range(-2, 4))
    assert manifest["config"]["W0"] == "[13/2^5,55/2^7]"


def test_build_is_deterministic(built, tmp_path):
    assert main(["build", str(FIXTURES / "tower.ini"), "--out", str(tmp_path)]) == 0
    for p in built.rglob("*"):
        if p.is_file():
            assert (tmp_path / p.relative_to(built)).read_bytes() == p.read_bytes()


def test_build_depth_zero(tmp_path):
    assert main(["build", "--depth", "0", "--out", str(tmp_path)]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert list(manifest["structures"]) == ["T1"]


def test_build_bad_dyadic(tmp_path, capsys):
    assert main(["build", str(FIXTURES / "bad_dyadic.ini"), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "3/5" in err and "bad_dyadic.ini:4" in err


def test_verify_full_build(built, tmp_path):
    report = tmp_path / "report.txt"
    assert main(["verify", str(built), "--out", str(report)]) == 0
    text = report.read_text()
    assert "fail=0" in text.splitlines()[-1]
    assert text.count("CHECK star.") == 28
    assert "seed=0" in text.splitlines()[0]


def test_verify_broken_fixture(capsys):
    assert main(["verify", str(FIXTURES / "broken_structure.ini")]) == 1
    out = capsys.readouterr().out
    line = [l for l in out.splitlines() if "axiom4" in l][0]
    assert "FAIL" in line and "witness: h" in line


def test_verify_star_only_is_deterministic(built, capsys):
    assert main(["verify", str(built), "--suite", "star", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["verify", str(built), "--suite", "star", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first
    assert all(l.startswith(("REPORT", "CHECK star.", "SUMMARY")) for l in first.splitlines())


def test_verify_missing_artifacts(tmp_path):
    assert main(["verify", str(tmp_path)]) == 2
    assert main(["verify", str(tmp_path / "nope.ini")]) == 2


def test_verify_unknown_suite(built):
    assert main(["verify", str(built), "--suite", "bogus"]) == 2


def test_class_tree_file(capsys):
    assert main(["class", str(FIXTURES / "trees.txt")]) == 0
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert last.startswith("directsum(Z, V(Z), V(V(Z)), …unbounded)") and last.endswith("ω²+1")


def test_class_ledger(capsys):
    assert main(["class", "--ledger", "2"]) == 0
    assert "2ω+2" in capsys.readouterr().out


def test_class_errors():
    assert main(["class", "wreath(Z"]) == 2
    assert main(["class", "wreath(M(Z))"]) == 1


def test_plot_default_h(tmp_path):
    svg = tmp_path / "h.svg"
    assert main(["plot", "default:h", "--out", str(svg)]) == 0
    text = svg.read_text()
    assert text.count('class="bump-guide"') == 2  # one bump: two endpoints
    assert 'stroke-dasharray="6,4"' in text and 'class="domain-guide"' in text
    assert ">1/2^2<" in text and ">3/2^2<" in text
    assert 'class="graph"' in text and 'class="diagonal"' in text


def test_plot_identity(capsys):
    assert main(["plot", "identity"]) == 0
    svg = capsys.readouterr().out
    assert 'class="diagonal"' in svg
    assert "graph" not in svg and "guide" not in svg


def test_plot_bad_map(tmp_path):
    bad = tmp_path / "bad.map"
    bad.write_text("0 -> 0\n1/3 -> 1/2\n1 -> 1\n")
    assert main(["plot", str(bad)]) == 2


def test_oracle_instance(capsys):
    assert main(["oracle", str(FIXTURES / "z2wrz3.ini")]) == 0
    out = capsys.readouterr().out
    assert "order=24" in out.splitlines()[0]


def test_oracle_default_suites():
    assert main(["oracle", "--suite", "similarity,tophom,kernel"]) == 0


def test_usage_errors():
    assert main([]) == 2
    assert main(["verify", "--bound", "0"]) == 2
