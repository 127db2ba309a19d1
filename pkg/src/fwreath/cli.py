"""Command line front end: ``build``, ``verify``, ``class``, ``plot`` and ``oracle``.

Exit status: 0 when every check passes (unresolved checks are counted but do
not fail a run), 1 when any check fails, 2 on usage, parse or input errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import classify, suites
from .constructions import (
    TowerConfig,
    build_tower,
    default_generators,
    render_interval,
)
from .exactnum import Dyadic, DyadicParseError, Interval, IntervalSet, parse_exact, render_exact
from .permoracle import (
    FinitePermGroup,
    Permutation,
    closure,
    independence_of_b1,
    kernel_control_finite,
    normal_form_finite,
    top_hom_finite,
    wreath_product,
)
from .plmap import PLMap, bump_decomposition, fundamental_domain
from .prewreath import GenSet, PreWreathStructure, StructureError, verify_axioms
from .report import Report, status

__all__ = ["main", "RunConfig", "CLIError"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CLIError(Exception):
    """Bad input; reported on stderr with exit status 2."""


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    word_bound: int | None = None
    depth: int | None = None
    dedup_cap: int | None = None
    out: str | None = None
    seed: int = 0
    suites: list | None = None

    def __post_init__(self):
        for name in ("word_bound", "dedup_cap"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise CLIError(f"--{name.split('_')[-1]} must be positive")
        if self.depth is not None and self.depth < 0:
            raise CLIError("--depth must be non-negative")


# ---------------------------------------------------------------- file formats

def _key_line(path: Path, key: str) -> int | None:
    pat = re.compile(rf"^\s*{re.escape(key)}\s*[=:]", re.IGNORECASE)
    for n, line in enumerate(path.read_text().splitlines(), 1):
        if pat.match(line):
            return n
    return None


def _where(path: Path, key: str | None = None) -> str:
    n = _key_line(path, key) if key else None
    return f"{path}:{n}" if n else str(path)


def read_map_text(text: str, origin: str = "<map>") -> PLMap:
    """Parse map text, pointing at the offending line on error."""
    pts = []
    for n, raw in enumerate(text.splitlines(), 1):
        for chunk in raw.split("#", 1)[0].split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "->" not in chunk:
                raise CLIError(f"{origin}:{n}: expected 'x -> y', got {chunk!r}")
            left, right = chunk.split("->", 1)
            try:
                pts.append((parse_exact(left), parse_exact(right)))
            except DyadicParseError as exc:
                raise CLIError(f"{origin}:{n}: {exc}") from None
    try:
        return PLMap(pts)
    except ValueError as exc:
        raise CLIError(f"{origin}: {exc}") from None


def read_map_file(path) -> PLMap:
    path = Path(path)
    if not path.is_file():
        raise CLIError(f"map file not found: {path}")
    return read_map_text(path.read_text(), str(path))


def resolve_map(source: str, base: Path | None = None) -> PLMap:
    """``default:h``, ``default:f``, ``identity``, inline pairs or a file path."""
    source = source.strip()
    if source in ("default:h", "default:f"):
        h, f = default_generators()
        return h if source.endswith("h") else f
    if source == "identity":
        return PLMap.identity()
    if "->" in source:
        return read_map_text(source, "<inline>")
    path = Path(source)
    if base is not None and not path.is_absolute():
        path = base / path
    return read_map_file(path)


def _ini(path: Path) -> configparser.ConfigParser:
    if not path.is_file():
        raise CLIError(f"file not found: {path}")
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise CLIError(f"{path}: {exc}") from None
    return cp


def _interval(path: Path, key: str, text: str) -> Interval:
    try:
        return Interval.parse(text)
    except (DyadicParseError, ValueError) as exc:
        raise CLIError(f"{_where(path, key)}: {exc}") from None


def _int(path: Path, key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise CLIError(f"{_where(path, key)}: expected an integer, got {text!r}") from None


def load_tower_config(path: Path | None, run: RunConfig) -> TowerConfig:
    """Read a ``[tower]`` section; command line flags override file values."""
    kw = {}
    h = f = None
    if path is not None:
        cp = _ini(path)
        if not cp.has_section("tower"):
            raise CLIError(f"{path}: missing [tower] section")
        sec = cp["tower"]
        base = path.parent
        for key in ("h", "f"):
            if key in sec:
                try:
                    m = resolve_map(sec[key], base)
                except CLIError as exc:
                    raise CLIError(f"{_where(path, key)}: {exc}") from None
                if key == "h":
                    h = m
                else:
                    f = m
        for key in ("Y0", "Y1", "W0"):
            if key in sec:
                kw[key] = _interval(path, key, sec[key])
        for key in ("depth", "bound", "window", "cap"):
            if key in sec:
                kw[key] = _int(path, key, sec[key])
    for key, val in (("depth", run.depth), ("bound", run.word_bound), ("cap", run.dedup_cap)):
        if val is not None:
            kw[key] = val
    dh, df = default_generators()
    Y0 = kw.pop("Y0", None)
    try:
        cfg = TowerConfig.default(**kw) if Y0 is None and h is None and f is None else \
            TowerConfig(h or dh, f or df, Y0 or TowerConfig.default().Y0, **kw)
    except (ValueError, StructureError) as exc:
        raise CLIError(f"{path or '<default>'}: {exc}") from None
    return cfg


def write_structure(S: PreWreathStructure, path: Path) -> None:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["structure"] = {"name": S.name}
    cp["Y"] = {"set": str(S.Y)}
    cp["X"] = {"set": str(S.X)}
    cp["generators"] = {lab: g.to_text("; ") for lab, g in zip(S.H.labels, S.H.generators)}
    with path.open("w") as fh:
        cp.write(fh)


def read_structure(path: Path) -> PreWreathStructure:
    cp = _ini(Path(path))
    for sec in ("Y", "X", "generators"):
        if not cp.has_section(sec):
            raise CLIError(f"{path}: missing [{sec}] section")
    sets = {}
    for sec in ("Y", "X"):
        try:
            sets[sec] = IntervalSet.parse(cp[sec].get("set", ""))
        except (DyadicParseError, ValueError) as exc:
            raise CLIError(f"{_where(path, 'set')}: [{sec}] {exc}") from None
    labels, gens = [], []
    for lab, text in cp["generators"].items():
        try:
            gens.append(read_map_text(text, f"{path} [generators] {lab}"))
        except CLIError as exc:
            raise CLIError(f"{_where(path, lab)}: {exc}") from None
        labels.append(lab)
    name = cp.get("structure", "name", fallback=path.stem) if cp.has_section("structure") else path.stem
    try:
        H = GenSet(name, gens, labels)
        return PreWreathStructure(sets["Y"], sets["X"], H, name)
    except StructureError as exc:
        raise CLIError(f"{path}: {exc}") from None


def read_perm_instance(path: Path):
    """INI with ``[instance]`` (A, B, b1) and ``[G]``/``[H]`` permutation lists."""
    cp = _ini(path)
    for sec in ("instance", "G", "H"):
        if not cp.has_section(sec):
            raise CLIError(f"{path}: missing [{sec}] section")
    inst = cp["instance"]
    nA = _int(path, "A", inst.get("A", ""))
    nB = _int(path, "B", inst.get("B", ""))
    b1 = _int(path, "b1", inst.get("b1", "0"))
    groups = []
    for sec, n in (("G", nA), ("H", nB)):
        gens = []
        for key, text in cp[sec].items():
            try:
                p = Permutation.parse(text)
            except ValueError as exc:
                raise CLIError(f"{_where(path, key)}: {exc}") from None
            if len(p) != n:
                raise CLIError(f"{_where(path, key)}: permutation of {len(p)} points, expected {n}")
            gens.append(p)
        if not gens:
            raise CLIError(f"{path}: [{sec}] has no generators")
        groups.append(closure(FinitePermGroup(n, gens)))
    if not 0 <= b1 < nB:
        raise CLIError(f"{_where(path, 'b1')}: b1 must lie in 0..{nB - 1}")
    return groups[0], groups[1], b1


# -------------------------------------------------------------------- commands

def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_build(run: RunConfig) -> int:
    cfg_path = Path(run.inputs[0]) if run.inputs else None
    cfg = load_tower_config(cfg_path, run)
    try:
        tower = build_tower(cfg, verify=False)
    except StructureError as exc:
        raise CLIError(f"{cfg_path or '<default>'}: {exc}") from None
    out = Path(run.out or "build")
    (out / "maps").mkdir(parents=True, exist_ok=True)
    (out / "structures").mkdir(parents=True, exist_ok=True)

    maps = {"h": cfg.h, "f": cfg.f}
    maps.update({f"h_{i}": tower.h[i] for i in sorted(tower.h)})
    map_files = {}
    for name, m in maps.items():
        rel = f"maps/{name}.map"
        (out / rel).write_text(m.to_text() + "\n")
        map_files[name] = rel
    struct_files = {}
    for i in sorted(tower.structures):
        rel = f"structures/T{i}.ini"
        write_structure(tower.structures[i], out / rel)
        struct_files[f"T{i}"] = rel
    manifest = {
        "config": {
            "Y0": render_interval(cfg.Y0),
            "Y1": render_interval(cfg.Y1),
            "W0": render_interval(cfg.W0),
            "depth": cfg.depth,
            "bound": cfg.bound,
            "window": cfg.window,
            "cap": cfg.cap,
        },
        "maps": map_files,
        "structures": struct_files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    sys.stdout.write(f"built {len(map_files)} maps and {len(struct_files)} structures in {out}\n")
    return EXIT_OK


@dataclass
class _Target:
    kind: str  # "default", "build" or "structure"
    config: TowerConfig | None = None
    structures: dict = field(default_factory=dict)


def _load_target(run: RunConfig) -> _Target:
    if not run.inputs:
        return _Target("default", TowerConfig.default())
    path = Path(run.inputs[0])
    if path.is_dir():
        mf = path / "manifest.json"
        if not mf.is_file():
            raise CLIError(f"{path}: no manifest.json; run 'build' first")
        try:
            manifest = json.loads(mf.read_text())
            conf = manifest["config"]
            h = read_map_file(path / manifest["maps"]["h"])
            f = read_map_file(path / manifest["maps"]["f"])
            cfg = TowerConfig(h, f, Interval.parse(conf["Y0"]), Interval.parse(conf["Y1"]),
                              Interval.parse(conf["W0"]), conf["depth"], conf["bound"],
                              conf["window"], conf["cap"])
        except (KeyError, ValueError) as exc:
            raise CLIError(f"{mf}: malformed manifest ({exc})") from None
        structs = {}
        for name, rel in sorted(manifest.get("structures", {}).items()):
            if not (path / rel).is_file():
                raise CLIError(f"missing artifact {path / rel}")
            structs[name] = read_structure(path / rel)
        return _Target("build", cfg, structs)
    if path.is_file():
        S = read_structure(path)
        return _Target("structure", None, {S.name: S})
    raise CLIError(f"no such file or directory: {path}")


VERIFY_DEFAULTS = {
    "default": list(suites.SUITES),
    "build": ["axioms", "tower", "star", "nesting", "sublemma", "crossval"],
    "structure": ["axioms"],
}


def _verify_suite(name: str, target: _Target, run: RunConfig) -> Report:
    cfg = target.config
    if name == "axioms":
        if not target.structures:
            raise CLIError("suite 'axioms' needs built artifacts or a structure file")
        rep = Report("axioms")
        bound = run.word_bound or (cfg.bound if cfg else 4)
        cap = run.dedup_cap or (cfg.cap if cfg else 20000)
        for sname, S in target.structures.items():
            rep.extend(verify_axioms(S, bound, cap), f"{sname}.")
        return rep
    if target.kind == "structure":
        return suites.run_suite(name, run.seed)
    # tower-dependent suites follow the loaded configuration
    if name == "star":
        return suites.star_suite(cfg.h, cfg.f)
    if name == "nesting":
        return suites.default_nesting_suite(cfg.h, cfg.f, bound=run.word_bound or 4)
    if name == "sublemma":
        return suites.sublemma_suite(cfg.h)
    if name == "tower":
        return suites.tower_suite(cfg)
    if name == "crossval":
        return suites.crossval_suite(build_tower(cfg, verify=False))
    return suites.run_suite(name, run.seed)


def cmd_verify(run: RunConfig) -> int:
    target = _load_target(run)
    selected = run.suites or VERIFY_DEFAULTS[target.kind]
    known = set(suites.SUITES) | {"axioms"}
    for name in selected:
        if name not in known:
            raise CLIError(f"unknown suite {name!r}; choose from {', '.join(sorted(known))}")
    rep = Report(f"verify target={target.kind} seed={run.seed} suites={','.join(selected)}")
    for name in selected:
        try:
            sub = _verify_suite(name, target, run)
            for c in sub.checks:
                if not c.name.startswith(name + "."):
                    c.name = f"{name}.{c.name}"
            rep.extend(sub)
        except StructureError as exc:
            raise CLIError(str(exc)) from None
    _emit(rep.text(), run.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_class(run: RunConfig, ledger: int | None) -> int:
    rows = []
    if ledger is not None:
        try:
            rows = classify.mainthm_ledger(ledger)
        except ValueError as exc:
            raise CLIError(str(exc)) from None
    texts, seen = [], set()
    for item in run.inputs:
        p = Path(item)
        if p.is_file():
            texts += [(f"{p}:{n}", ln) for n, ln in enumerate(p.read_text().splitlines(), 1)]
        else:
            texts.append(("<arg>", item))
    try:
        for where, line in texts:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                tree = classify.parse_tree(line)
            except classify.TreeParseError as exc:
                raise CLIError(f"{where}: {exc}") from None
            for sub in classify.subtrees(tree):
                if sub in seen:
                    continue
                seen.add(sub)
                rows.append((sub, classify.class_of(sub).label()))
    except (classify.HypothesisError, classify.OrdinalRangeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        if rows:
            _emit(classify.ledger_table(rows), run.out)
        return EXIT_FAIL
    if not rows:
        raise CLIError("class: give a tree, a tree file or --ledger K")
    _emit(classify.ledger_table(rows), run.out)
    return EXIT_OK


# ------------------------------------------------------------------------ SVG

SVG_SIZE, SVG_MARGIN = 400, 50


def _px(x) -> str:
    return f"{SVG_MARGIN + float(x) * SVG_SIZE:.3f}"


def _py(y) -> str:
    return f"{SVG_MARGIN + (1 - float(y)) * SVG_SIZE:.3f}"


def render_svg(m: PLMap, title: str = "") -> str:
    """Graph of ``m`` over the unit square with bump and domain guides."""
    W = SVG_SIZE + 2 * SVG_MARGIN
    lo, hi = _px(0), _px(1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        f"<title>{title}</title>" if title else "",
        f'<rect class="frame" x="{lo}" y="{_py(1)}" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        'fill="none" stroke="black"/>',
        f'<line class="diagonal" x1="{lo}" y1="{_py(0)}" x2="{hi}" y2="{_py(1)}" stroke="gray"/>',
    ]
    ticks = {Dyadic(0, 0), Dyadic(1, 0)}
    for b in bump_decomposition(m):
        a, c = b.interval.lo, b.interval.hi
        ticks |= {a, c}
        for x in (a, c):
            parts.append(f'<line class="bump-guide" x1="{_px(x)}" y1="{_py(0)}" x2="{_px(x)}" '
                         f'y2="{_py(1)}" stroke="blue" stroke-dasharray="6,4"/>')
        D = fundamental_domain(b, b.interval.midpoint())
        for x in (D.lo, D.hi):
            ticks.add(x)
            parts.append(f'<line class="domain-guide" x1="{_px(x)}" y1="{_py(0)}" x2="{_px(x)}" '
                         f'y2="{_py(1)}" stroke="green" stroke-dasharray="1,3"/>')
    if not m.is_identity():
        pts = " ".join(f"{_px(x)},{_py(y)}" for x, y in zip(m.xs, m.ys))
        parts.append(f'<polyline class="graph" points="{pts}" fill="none" stroke="black" stroke-width="2"/>')
    for x in sorted(ticks):
        parts.append(f'<text class="tick" x="{_px(x)}" y="{SVG_MARGIN + SVG_SIZE + 16}" '
                     f'font-size="9" text-anchor="middle">{render_exact(x)}</text>')
    parts.append("</svg>")
    return "\n".join(p for p in parts if p)


def cmd_plot(run: RunConfig) -> int:
    if len(run.inputs) != 1:
        raise CLIError("plot takes one map (file, inline pairs, default:h, default:f or identity)")
    m = resolve_map(run.inputs[0])
    svg = render_svg(m, run.inputs[0])
    if run.out:
        Path(run.out).write_text(svg + "\n")
    else:
        sys.stdout.write(svg + "\n")
    return EXIT_OK


def cmd_oracle(run: RunConfig) -> int:
    if run.inputs:
        G, H, b1 = read_perm_instance(Path(run.inputs[0]))
        try:
            wp = wreath_product(G, H, b1, cap=run.dedup_cap or 10000)
        except ValueError as exc:
            raise CLIError(f"{run.inputs[0]}: {exc}") from None
        rep = Report(f"oracle instance={run.inputs[0]} seed={run.seed} order={len(wp.group.elements)}")
        rep.extend(top_hom_finite(wp), "tophom.")
        rep.extend(kernel_control_finite(wp, wp.h_stars[0]), "kernel.")
        rep.extend(normal_form_finite(wp, 500, 8, run.seed), "normalform.")
        rep.add("b1_independent", status(independence_of_b1(G, H)))
    else:
        names = run.suites or ["similarity", "tophom", "kernel", "normalform", "crossval"]
        rep = Report(f"oracle seed={run.seed} suites={','.join(names)}")
        for name in names:
            try:
                rep.extend(suites.run_suite(name, run.seed), f"{name}.")
            except KeyError as exc:
                raise CLIError(str(exc.args[0])) from None
    _emit(rep.text(), run.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ----------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fwreath", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, help="word length bound for enumeration")
    common.add_argument("--depth", type=int, help="tower depth")
    common.add_argument("--cap", type=int, help="enumeration cap on distinct elements")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--suite", action="append",
                        help="suite to run (repeatable or comma separated)")
    common.add_argument("--out", help="output file or directory")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build tower maps and structures") \
        .add_argument("inputs", nargs="?", help="tower config (INI); defaults built in")
    sub.add_parser("verify", parents=[common], help="run verification suites") \
        .add_argument("inputs", nargs="?", help="build directory or structure file")
    c = sub.add_parser("class", parents=[common], help="class ledger for trees")
    c.add_argument("inputs", nargs="*", help="tree files or tree expressions")
    c.add_argument("--ledger", type=int, metavar="K", help="print the G0..GK ledger")
    sub.add_parser("plot", parents=[common], help="SVG plot of a PL map") \
        .add_argument("inputs", nargs="?", help="map file, default:h, default:f or identity")
    sub.add_parser("oracle", parents=[common], help="finite permutation oracle") \
        .add_argument("inputs", nargs="?", help="permutation instance file (INI)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    inputs = args.inputs if isinstance(args.inputs, list) else ([args.inputs] if args.inputs else [])
    selected = None
    if args.suite:
        selected = [s for chunk in args.suite for s in chunk.split(",") if s]
    try:
        run = RunConfig(args.command, inputs, args.bound, args.depth, args.cap,
                        args.out, args.seed, selected)
        if args.command == "build":
            return cmd_build(run)
        if args.command == "verify":
            return cmd_verify(run)
        if args.command == "class":
            return cmd_class(run, args.ledger)
        if args.command == "plot":
            return cmd_plot(run)
        return cmd_oracle(run)
    except CLIError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
