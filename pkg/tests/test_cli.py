import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bvglue import suites
from bvglue.cli import SCHEMA, SEED_ENV, SuiteConfig, explain, main, run
from bvglue.scenario import Scenario, ScenarioError, parse_poly
from bvglue.superpoly import Kind, Universe, random_poly

ROOT = Path(__file__).parent.parent
GOLDEN = Path(__file__).parent / "golden" / "report_zeta.json"


def cfg(suite, **kw):
    return SuiteConfig(suite=suite, **kw)


# reports ----------------------------------------------------------------------

def test_zeta_report_contains_L_minus_one():
    rep = run(cfg("zeta"))
    rec = {r.name: r for r in rep.records}["L(-1)=0"]
    assert rec.residual == "0" and rec.passed
    assert rep.passed and rep.summary()["failed"] == 0


def test_clifford_relations_one_trial():
    rep = run(cfg("clifford", trials=1))
    rel = [r for r in rep.records if r.name.startswith("clifford-relation[")]
    assert len(rel) == 100
    assert all(r.residual == "0" for r in rel)
    assert rep.passed


def test_report_schema_golden():
    rep = run(cfg("zeta", seed=7))
    assert json.loads(rep.render()) == json.loads(GOLDEN.read_text())


def test_report_keys():
    data = run(cfg("zeta")).to_json()
    assert data["schema"] == SCHEMA
    assert set(data) == {"schema", "config", "records", "summary"}
    assert set(data["config"]) == {"suite", "seed", "seed_source", "trials", "max_degree",
                                   "truncation", "scenario"}
    assert set(data["records"][0]) == {"name", "suite", "anchor", "residual", "passed",
                                       "instances", "failures"}
    assert "wall_time" not in data["records"][0]


def test_timings_are_opt_in():
    rep = run(cfg("zeta", timings=True))
    assert all(r.wall_time is not None for r in rep.records)
    assert "time (s)" in run(cfg("zeta", timings=True, report_format="md")).render()


def test_determinism_and_seed_sensitivity():
    a = run(cfg("bv", seed=3, trials=3)).render()
    b = run(cfg("bv", seed=3, trials=3)).render()
    assert a == b
    assert run(cfg("bv", seed=4, trials=3)).to_json()["config"]["seed"] == 4


def test_per_check_streams_are_independent():
    r1 = suites.check_rng(5, "stokes").integers(0, 2**32, 4)
    r2 = suites.check_rng(5, "dirichlet").integers(0, 2**32, 4)
    assert list(r1) != list(r2)
    assert list(r1) == list(suites.check_rng(5, "stokes").integers(0, 2**32, 4))


def test_markdown_report():
    text = run(cfg("zeta", report_format="md")).render()
    assert text.startswith("# bvglue report")
    assert "| L(-1)=0 | zeta | pass | `0` |" in text


def test_only_filter():
    rep = run(cfg("zeta"), only=["bernoulli-b2"])
    assert [r.name for r in rep.records] == ["bernoulli-b2"]
    with pytest.raises(ValueError, match="not in suite"):
        run(cfg("zeta"), only=["stokes"])


def test_failing_and_crashing_checks(monkeypatch):
    reg = dict(suites.REGISTRY)
    reg["zz-fails"] = suites.Check("zz-fails", "zeta", "a", "f", "c", lambda ctx: [0, 3, 0])
    reg["zz-crashes"] = suites.Check("zz-crashes", "zeta", "a", "f", "c", lambda ctx: 1 // 0)
    monkeypatch.setattr(suites, "REGISTRY", reg)
    rep = run(cfg("zeta"))
    recs = {r.name: r for r in rep.records}
    assert recs["zz-fails"].residual == "instance 1: 3" and recs["zz-fails"].failures == 1
    assert recs["zz-crashes"].residual.startswith("error: ZeroDivisionError")
    assert not rep.passed


def test_residual_text():
    U = Universe("text")
    x = U.gen("x")
    assert suites.residual_text(U.zero()) == "0"
    assert suites.residual_text([U.zero(), x * 2]) == "2*x"
    assert suites.residual_text({"a": True, "b": False}) == "b: violated"
    with pytest.raises(TypeError):
        suites.residual_text(object())


# command line -------------------------------------------------------------------

def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "--suite", "zeta", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["failed"] == 0
    assert main(["--suite", "bogus"]) == 2
    assert "unknown suite" in capsys.readouterr().err
    assert main(["--suite", "zeta", "--scenario", str(tmp_path / "missing.json")]) == 2
    assert "cannot read scenario" in capsys.readouterr().err


def test_main_exit_code_on_failure(monkeypatch, tmp_path):
    reg = dict(suites.REGISTRY)
    reg["zz-fails"] = suites.Check("zz-fails", "zeta", "a", "f", "c", lambda ctx: [1])
    monkeypatch.setattr(suites, "REGISTRY", reg)
    assert main(["--suite", "zeta", "--out", str(tmp_path / "r.json")]) == 1


def test_seed_from_environment_is_echoed(monkeypatch, tmp_path):
    out = tmp_path / "r.json"
    monkeypatch.setenv(SEED_ENV, "99")
    assert main(["--suite", "zeta", "--out", str(out)]) == 0
    conf = json.loads(out.read_text())["config"]
    assert conf["seed"] == 99 and conf["seed_source"] == f"env {SEED_ENV}"
    assert main(["--suite", "zeta", "--seed", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["seed_source"] == "flag"
    monkeypatch.setenv(SEED_ENV, "x")
    assert main(["--suite", "zeta", "--out", str(out)]) == 2


def test_seed_range_checked():
    with pytest.raises(ValueError, match="64-bit"):
        run(cfg("zeta", seed=2**64))


def test_explain():
    assert "Coboundary identity of the partition-of-unity operators" in explain("lemma-eta-k1")
    assert "Square root of the Berezinian" in explain("ber-half-mult")
    assert "proper family of Lagrangian submanifolds" in explain("ms-theorem")
    assert "clifford-relation" in explain("clifford-relation[3,4]")
    with pytest.raises(KeyError):
        explain("no-such-check")


def test_explain_command(capsys):
    assert main(["explain", "L(-1)=0"]) == 0
    assert "L(-1) = 0" in capsys.readouterr().out
    assert main(["explain", "nope"]) == 2


def test_every_check_is_explained():
    for name, chk in suites.REGISTRY.items():
        assert chk.anchor and chk.formula and chk.constants, name


def test_list_command(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "lemma-fixed" in out and "scenario-coboundary" in out


# scenarios ------------------------------------------------------------------------

SU = Universe("parse")
SU.declare_hbar()
SX = [SU.gen(n, 0, 0, Kind.EVEN_COORD) for n in ("x1", "x2")]
SL = [SU.gen(n, 1, 1, Kind.ODD_CONST) for n in ("lam1", "lam2")]


def test_parse_examples():
    x1, x2 = SX
    assert parse_poly("1 - x1^2", SU) == 1 - x1 ** 2
    assert parse_poly("3/2*x1*x2 - hbar^-1", SU) == x1 * x2 * Fraction(3, 2) - SU["hbar"].poly ** -1
    assert parse_poly("lam1*lam1", SU).is_zero()
    assert parse_poly("-(x1 + x2)**2", SU) == -(x1 + x2) ** 2


@pytest.mark.parametrize("bad", ["y1 + 1", "x1 / x2", "x1 ^ x2", "x1.real", "f(x1)", "1.5*x1", "x1 +"])
def test_parse_rejects(bad):
    with pytest.raises(ScenarioError):
        parse_poly(bad, SU)


@settings(max_examples=60)
@given(st.integers(0, 2**31))
def test_parse_roundtrips_canonical_text(seed):
    rng = np.random.default_rng(seed)
    p = random_poly(rng, SX + SL + [SU["hbar"]], 4, 5)
    q = p * SU["hbar"] ** -2 * Fraction(-5, 3)
    for f in (p, q):
        assert parse_poly(f.to_text(), SU) == f


def test_scenario_validation(tmp_path):
    base = json.loads((ROOT / "scenarios" / "three-opens.json").read_text())
    for key in ("name", "pou"):
        bad = dict(base)
        del bad[key]
        with pytest.raises(ScenarioError, match="missing"):
            Scenario.from_dict(bad)
    with pytest.raises(ScenarioError, match="unknown scenario keys"):
        Scenario.from_dict({**base, "colour": 1})
    with pytest.raises(ScenarioError, match="one gauge fermion"):
        Scenario.from_dict({**base, "gauge_fermions": base["gauge_fermions"][:1]})
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ScenarioError, match="not valid JSON"):
        Scenario.load(path)


def test_scenario_run():
    rep = run(cfg("zeta", scenario=str(ROOT / "scenarios" / "three-opens.json")))
    recs = {r.name: r for r in rep.records}
    assert recs["scenario-observable[three-opens:0]"].value == "1"
    assert recs["scenario-observable[three-opens:1]"].value == "0"
    assert sum(n.startswith("scenario-coboundary") for n in recs) == 4
    assert rep.passed


def test_scenario_with_bad_pou_fails_cleanly(tmp_path):
    data = json.loads((ROOT / "scenarios" / "three-opens.json").read_text())
    data["pou"] = ["x1", "x2", "1"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(data))
    assert main(["--suite", "zeta", "--scenario", str(path), "--out", str(tmp_path / "r.json")]) == 2
