import argparse
import json

import pytest
from hypothesis import given, strategies as st

from segrelc.algebra import Ring
from segrelc.cli import Config, Result, Session, build_report, exit_code_for, load_config, main, run_script
from segrelc.dsl import (
    CdCmd,
    DepthCmd,
    DSLError,
    EulerianCmd,
    GotoCmd,
    IdealDecl,
    KunnethCmd,
    LcTableCmd,
    ModuleDecl,
    ReportCmd,
    RingDecl,
    SaturationCmd,
    SegreDecl,
    parse_polynomial,
    parse_script,
    render,
)
from segrelc.report import SCHEMA_VERSION, emit_report, load_report, render_markdown
from segrelc.verdict import VerificationVerdict

SAMPLE = """
-- two planes and their Segre product
ring R = QQ[x,y];
ring S = QQ[u,v];
ideal I = (x) in R;
ideal J = (u) in S;
segre T = R # S;
kunneth R I R S J S box=-2..2 k<=3;
"""


def args(**kw):
    base = {k: None for k in Config.KEYS}
    base["config"] = None
    base.update(kw)
    return argparse.Namespace(**base)


# -- parsing --------------------------------------------------------------------------


def test_parse_examples():
    (s,) = parse_script("ring R = QQ[x,y];")
    assert s.command == RingDecl("R", "QQ", ("x", "y"))
    (s,) = parse_script("ideal I = (x^2, x*y) in R;")
    assert s.command == IdealDecl("I", ("x^2", "x*y"), "R")
    (s,) = parse_script("kunneth R I R S J S box=-3..3 k<=3;")
    assert s.command == KunnethCmd("R", "I", "R", "S", "J", "S", (-3, 3), 3)
    (s,) = parse_script("module M = coker [[x, y]] in R twists (0);")
    assert s.command == ModuleDecl("M", (("x", "y"),), "R", (0,))


def test_kunneth_dispatch_uses_rings_as_modules():
    session, code, report = run_script(SAMPLE)
    assert code == 0
    (entry,) = [c for c in report["commands"] if c["kind"] == "KunnethCmd"]
    assert entry["status"] == "verified-on-box"
    assert entry["payload"]["inputs"]["M"] == "R" and entry["payload"]["inputs"]["N"] == "S"
    assert session.bindings["ideal"]["I"].generators[0] == Ring(["x", "y"])("x")


def test_comments_and_locations():
    stmts = parse_script("ring R = QQ[x];  -- trailing\n\n  ideal I = (x) in R;")
    assert [(s.line, s.column) for s in stmts] == [(1, 1), (3, 3)]


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("ring R = QQ[x,y];\nideal I = (x, z) in R;", 2, 1),
        ("ring R = QQ[x,y]", 1, 1),
        ("ring R = QQ[x];\n  frobnicate R;", 2, 3),
        ("ring R = GF(4)[x];", 1, 1),
        ("ring R = QQ[x];\nideal I = (x) in S;", 2, 1),
        ("ring R = QQ[x];\nring R = QQ[y];", 2, 1),
        ("ring R = QQ[x,y];\nideal I = (x) in R;\nlctable I I R;", 3, 1),
    ],
)
def test_errors_carry_location(text, line, column):
    with pytest.raises(DSLError) as exc:
        run_script(text)
    assert (exc.value.line, exc.value.column) == (line, column)
    assert f"line {line}" in str(exc.value)


def test_polynomial_parser():
    R = Ring(["x", "y"])
    assert parse_polynomial("(x+y)^2 - 2*x*y", R) == R("x^2 + y^2")
    assert parse_polynomial("3/2*x", R) == R.gens()[0].scale(__import__("fractions").Fraction(3, 2))
    with pytest.raises(DSLError):
        parse_polynomial("x +", R)


names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,4}", fullmatch=True)
polys = st.sampled_from(["x", "x^2", "x*y", "2*x-y", "y^3+x*y^2", "-x", "1/2*x"])
rng = st.tuples(st.integers(-9, 0), st.integers(0, 9))
fields = st.sampled_from(["QQ", "k", "GF(2)", "GF(3)", "GF(101)"])


@st.composite
def module_decls(draw):
    name, ring = draw(names), draw(names)
    if draw(st.booleans()):
        return ModuleDecl(name, None, ring, tuple(draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3))))
    nrows, ncols = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    matrix = tuple(tuple(draw(polys) for _ in range(ncols)) for _ in range(nrows))
    return ModuleDecl(name, matrix, ring, tuple(draw(st.integers(-3, 3)) for _ in range(nrows)))


commands = st.one_of(
    st.builds(RingDecl, names, fields, st.lists(names, min_size=1, max_size=4).map(tuple), st.lists(polys, max_size=2).map(tuple)),
    st.builds(IdealDecl, names, st.lists(polys, max_size=3).map(tuple), names),
    module_decls(),
    st.builds(SegreDecl, names, names, names),
    st.builds(LcTableCmd, names, names, names, st.none() | rng),
    st.builds(KunnethCmd, names, names, names, names, names, names, st.none() | rng, st.integers(0, 6)),
    st.builds(SaturationCmd, names, names, names, names, names, names, st.none() | rng),
    st.builds(GotoCmd, names, names, names, names, rng),
    st.builds(DepthCmd, names, names, st.sampled_from(["bound", "equality"]), st.none() | rng),
    st.builds(CdCmd, names, names, st.sampled_from(["bound", "poly", "cci"]), st.none() | rng),
    st.builds(EulerianCmd, names, names, st.integers(1, 5), st.none() | rng),
    st.builds(
        ReportCmd,
        st.from_regex(r"[A-Za-z0-9_./]{1,12}", fullmatch=True).filter(lambda s: "--" not in s),
        st.none() | st.sampled_from(["json", "markdown"]),
    ),
)


@given(commands)
def test_render_parse_round_trip(cmd):
    (s,) = parse_script(render(cmd))
    assert s.command == cmd


# -- configuration -------------------------------------------------------------------------


def test_config_precedence(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"threads": 3, "box": [-2, 2]}))
    env = {"SEGRELC_THREADS": "2", "SEGRELC_FIELD": "GF(5)", "SEGRELC_BOX": "-1..1", "SEGRELC_FORMAT": "markdown"}
    cfg = load_config(args(config=str(cfg_file), threads=4), env)
    assert cfg.threads == 4 and cfg.sources["threads"] == "flag"
    assert cfg.box == (-2, 2) and cfg.sources["box"] == "config"
    assert cfg.field == "GF(5)" and cfg.sources["field"] == "env"
    assert cfg.format == "markdown"
    assert load_config(args(), {}).box == (-3, 3)
    env["SEGRELC_CONFIG"] = str(cfg_file)
    assert load_config(args(), env).threads == 3


def test_config_rejects_bad_values(tmp_path):
    with pytest.raises(ValueError):
        load_config(args(), {"SEGRELC_FIELD": "RR"})
    with pytest.raises(ValueError):
        load_config(args(threads=0), {})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ValueError):
        load_config(args(config=str(bad)), {})


def test_default_field_in_ring_declaration():
    session, _, _ = run_script("ring R = k[x];", Config(field="GF(7)"))
    assert session.bindings["ring"]["R"].field.characteristic == 7


# -- reports and exit codes -------------------------------------------------------------------


def test_json_report_round_trip(tmp_path):
    _, code, report = run_script(SAMPLE)
    path = tmp_path / "out" / "report.json"
    text = emit_report(report, "json", path)
    loaded = load_report(path)
    assert loaded["schema_version"] == SCHEMA_VERSION
    assert json.dumps(loaded, sort_keys=True, indent=2) + "\n" == text
    (entry,) = [c for c in loaded["commands"] if c["kind"] == "KunnethCmd"]
    assert entry["status"] == "verified-on-box"
    assert isinstance(entry["witnesses"], list) and entry["witnesses"]


def test_report_is_deterministic():
    _, _, a = run_script(SAMPLE)
    _, _, b = run_script(SAMPLE)
    for r in (a, b):
        for c in r["commands"]:
            c["seconds"] = 0
    assert emit_report(a, "json") == emit_report(b, "json")


def test_refuted_result_exit_code_and_witness():
    session = Session()
    witness = {"bidegree": [[-1, 1], [-1, 1]], "lhs": 1, "rhs": 2}
    v = VerificationVerdict.refuted(witness, "dimension mismatch")
    session.results.append(Result("kunneth R I R S J S;", 1, "KunnethCmd", v, {}, [witness]))
    code = exit_code_for(session.results)
    assert code == 1
    report = build_report(session, code)
    assert "[-1, 1]" in render_markdown(report)
    assert json.loads(emit_report(report, "json"))["commands"][0]["verdict"]["witness"]["bidegree"] == [[-1, 1], [-1, 1]]


def test_refuted_requires_witness():
    with pytest.raises(ValueError):
        VerificationVerdict.refuted(None)


def test_window_limited_certainty_field():
    script = "ring R = QQ[x,y];\nideal I = (x) in R;\nlctable R I R box=0..3;"
    _, code, report = run_script(script)
    assert code == 2
    assert json.loads(emit_report(report, "json"))["commands"][-1]["certainty"] == "window-limited"


def test_lctable_duality_fallback():
    script = "ring R = QQ[x,y];\nideal m = (x, y) in R;\nmodule M = coker [[x^2 - y^2, x*y]] in R twists (0);\nlctable R m M box=-3..3;"
    _, code, report = run_script(script)
    entry = report["commands"][-1]
    assert code == 0 and entry["payload"]["route"] == "duality"


def test_main_writes_reports(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text(SAMPLE + "report out=" + str(tmp_path / "r.md") + " format=markdown;\n")
    out = tmp_path / "r.json"
    code = main(["--script", str(script), "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["exit_code"] == 0
    md = (tmp_path / "r.md").read_text()
    assert "verified-on-box" in md
    assert "line 8: verified-on-box" in capsys.readouterr().out


def test_main_usage_errors(tmp_path, capsys):
    script = tmp_path / "bad.txt"
    script.write_text("ring R = QQ[x,y];\nideal I = (x, q) in R;\n")
    assert main(["--script", str(script)]) == 3
    assert "line 2" in capsys.readouterr().err
    assert main(["--format", "xml"]) == 3
    assert main(["--script", str(tmp_path / "missing.txt")]) == 3


def test_main_inconclusive_exit_code(tmp_path):
    script = tmp_path / "s.txt"
    script.write_text(
        "ring R = QQ[x,y];\nring S = QQ[u,v];\nideal I = (x, y) in R;\nideal J = (u, v) in S;\n"
        "depth I # J mode=equality box=-3..1;\n"
    )
    assert main(["--script", str(script), "--out", str(tmp_path / "o.json")]) == 2
