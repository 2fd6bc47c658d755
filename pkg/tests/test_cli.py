import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from helpers import parse_dot
from singlip import jsonio
from singlip.cli import main
from singlip.fixtures import fixture_names


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def paths(tmp_path):
    out = {}
    for name in fixture_names():
        code, dump, _ = run_cli("fixtures", "dump", name)
        assert code == 0
        p = tmp_path / f"{name}.json"
        p.write_text(dump)
        out[name] = str(p)
    return out


def test_fixtures_list():
    code, out, _ = run_cli("fixtures", "list")
    assert code == 0
    assert "e8 (graph)" in out
    assert "cusp-53 (curve)" in out


def test_curve_contacts(paths):
    code, out, _ = run_cli("curve", "contacts", paths["carrousel-example"])
    assert code == 0
    assert "3/2, 13/6, 5/2" in out
    code, out, _ = run_cli("--format", "json", "curve", "contacts",
                           paths["carrousel-example"])
    doc = json.loads(out)
    assert doc["size"] == 8


def test_curve_resolve_and_verify_round_trip(paths, tmp_path):
    code, out, _ = run_cli("--format", "json", "curve", "resolve",
                           paths["cusp-53"])
    assert code == 0
    doc = json.loads(out)
    assert [v["self_intersection"] for v in doc["vertices"]] == [-3, -3, -2, -1]
    tower_path = tmp_path / "tower.json"
    tower_path.write_text(out)
    code, out, _ = run_cli("verify", str(tower_path))
    assert code == 0 and "ok" in out


def test_curve_horns(paths):
    code, out, _ = run_cli("curve", "horns", "--base", "6",
                           paths["carrousel-example"])
    assert code == 0
    assert "thresholds: 5/2, 3/2" in out
    assert "counts: 1, 2, 8" in out


def test_curve_equiv(paths):
    code, out, _ = run_cli("curve", "equiv", paths["carrousel-example"],
                           paths["carrousel-example"])
    assert code == 0 and "equivalent: true" in out
    code, out, _ = run_cli("curve", "equiv", paths["carrousel-example"],
                           paths["cusp-53"])
    assert code == 0 and "equivalent: false" in out


def test_graph_mult(paths):
    code, out, _ = run_cli("graph", "mult", "--arrow", "x", paths["e8"])
    assert code == 0
    assert "E1: 15" in out and "E8: 8" in out


def test_graph_laufer(paths):
    code, out, _ = run_cli("graph", "laufer", paths["cusp-53"])
    assert code == 0
    assert out.count("self=-2") == 8


def test_graph_pencil(paths):
    code, out, _ = run_cli("graph", "pencil", "--gen", "x", "--gen", "y:2",
                           "--resolve", paths["e8"])
    assert code == 0
    assert "base points on: E8" in out
    assert "E8(-3), E9(-2), E10(-1)" in out


def test_graph_thickthin(paths):
    code, out, _ = run_cli("graph", "thickthin", paths["d4"])
    assert code == 0 and "metrically conical: true" in out
    code, out, _ = run_cli("graph", "thickthin", paths["e8"])
    assert code == 0 and "metrically conical: false" in out


def test_graph_decompose(paths):
    code, out, _ = run_cli("graph", "decompose", "--mode", "inner",
                           paths["e8"])
    assert code == 0
    assert "B(1)" in out and "A(1,5/3)" in out and "B(5/3)" in out


def test_graph_signature_compare(paths):
    code, out, _ = run_cli("graph", "signature", "--metric", "inner",
                           paths["e8"], paths["e8"])
    assert code == 0 and "equal: true" in out
    code, out, _ = run_cli("graph", "signature", "--metric", "inner",
                           paths["e8"], paths["d4"])
    assert code == 0 and "equal: false" in out


def test_every_fixture_passes_verify(paths):
    for name, path in paths.items():
        code, out, _ = run_cli("verify", path)
        assert code == 0, (name, out)


def test_verify_fails_on_broken_graph(paths, tmp_path):
    doc = json.loads((io.open(paths["e8"]).read()))
    doc["vertices"][0]["multiplicities"]["h"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run_cli("verify", str(bad))
    assert code == 1
    assert "laufer residual" in out


def test_input_errors_exit_2(tmp_path):
    missing = tmp_path / "missing.json"
    code, _, err = run_cli("curve", "contacts", str(missing))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli("curve", "contacts", str(bad))
    assert code == 2 and "line" in err
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"format": "nope"}))
    code, _, err = run_cli("curve", "contacts", str(wrong))
    assert code == 2


def test_strict_mode_rejects_unknown_fields(paths, tmp_path):
    doc = json.loads(io.open(paths["cusp-53"]).read())
    doc["extra"] = 1
    p = tmp_path / "extra.json"
    p.write_text(json.dumps(doc))
    code, _, _ = run_cli("curve", "contacts", str(p))
    assert code == 0  # tolerated without --strict
    code, _, err = run_cli("--strict", "curve", "contacts", str(p))
    assert code == 2 and "unknown fields" in err


def test_outputs_deterministic(paths):
    for argv in (["curve", "resolve", paths["carrousel-example"]],
                 ["--format", "json", "graph", "decompose", "--mode", "outer",
                  paths["e8-nash"]],
                 ["--format", "json", "curve", "carrousel",
                  paths["carrousel-example"]]):
        _, first, _ = run_cli(*argv)
        _, second, _ = run_cli(*argv)
        assert first == second


def test_dot_outputs_parse(paths):
    for argv in (["--format", "dot", "curve", "resolve", paths["cusp-53"]],
                 ["--format", "dot", "curve", "carrousel",
                  paths["carrousel-example"]],
                 ["--format", "dot", "graph", "laufer", paths["cusp-53"]],
                 ["--format", "dot", "graph", "decompose", "--mode", "inner",
                  paths["e8"]]):
        code, out, _ = run_cli(*argv)
        assert code == 0
        parsed = parse_dot(out)
        assert parsed["nodes"]


def test_event_cap_env(paths, monkeypatch):
    monkeypatch.setenv("SINGLIP_EVENT_CAP", "2")
    code, _, err = run_cli("curve", "resolve", paths["cusp-53"])
    assert code == 1 and "cap" in err


def test_declared_denominator_checked(tmp_path):
    doc = {"format": jsonio.CURVE_FORMAT,
           "branches": [{"denominator": 4,
                         "terms": [{"exp": {"num": 3, "den": 2},
                                    "coeff": {"num": 1, "den": 1}}]}]}
    p = tmp_path / "curve.json"
    p.write_text(json.dumps(doc))
    code, _, err = run_cli("curve", "contacts", str(p))
    assert code == 2 and "denominator" in err
