import json

import pytest
from click.testing import CliRunner
from hypothesis import given
from hypothesis import strategies as st

from skewps.cli import main
from skewps.config import build_datum, list_fixtures, load_config, parse_config
from skewps.errors import ConfigError, InstanceError
from skewps.report import dumps, run
from skewps.suites import BY_ID, REGISTRY


def test_p_not_prime():
    with pytest.raises(ConfigError, match="p not prime") as exc:
        parse_config("[instance]\nid = 'x'\np = 4\n")
    assert exc.value.key == "p" and exc.value.line == 3


def test_bad_values_report_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("[instance]\np = 2\nprecision = 0\n")
    assert exc.value.key == "precision"
    with pytest.raises(ConfigError) as exc:
        parse_config("[instance]\np = 2\nseed = 'abc'\n")
    assert exc.value.key == "seed"
    with pytest.raises(ConfigError):
        parse_config("[instance\np = 2")


def test_instance_error_names_invariant():
    cfg = parse_config("[instance]\np = 2\nk = 2\nt = '2'\n[instance.sigma]\nfrobenius = 1\n")
    with pytest.raises(InstanceError, match="sigma\\(t\\) = t"):
        build_datum(cfg)


def test_fixtures_load():
    names = list_fixtures()
    assert {"F4-ramified", "iwasawa-f4", "frobenius-f4", "as-f4", "as-f27", "fd-lab"} <= set(names)
    for n in names:
        build_datum(load_config(n + ".toml"))


def test_registry_is_sorted_and_unique():
    ids = [s.id for s in REGISTRY]
    assert ids == sorted(ids) and len(set(ids)) == len(ids)
    assert all(s.citation and s.operation for s in REGISTRY)


def test_list_suites_stable():
    runner = CliRunner()
    a = runner.invoke(main, ["list-suites"]).output
    b = runner.invoke(main, ["list-suites"]).output
    assert a == b
    lines = a.strip().splitlines()
    assert [ln.split()[0] for ln in lines] == [s.id for s in REGISTRY]
    assert any(ln.startswith("supp-lemma ") for ln in lines)
    assert any(ln.startswith("mult-formula ") for ln in lines)


def test_verify_exit_codes(tmp_path, monkeypatch):
    runner = CliRunner()
    monkeypatch.setenv("SKEWPS_REPORT_DIR", str(tmp_path))
    ok = runner.invoke(main, ["verify", "iwasawa-f4.toml", "--suite", "relations"])
    assert ok.exit_code == 0, ok.output
    rep = json.loads((tmp_path / "iwasawa-f4.verify.json").read_text())
    assert rep["passed"] and rep["records"][0]["suite"] == "relations"
    bad = tmp_path / "bad.toml"
    bad.write_text("[instance]\np = 4\n")
    res = runner.invoke(main, ["verify", str(bad)])
    assert res.exit_code == 2 and "p not prime" in res.output
    res = runner.invoke(main, ["verify", "iwasawa-f4.toml", "--suite", "nope"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["verify", "fd-lab.toml", "--suite", "phi-psi"])
    assert res.exit_code == 1


def test_report_is_deterministic():
    cfg = load_config("ore-f4.toml")
    a = dumps(run(cfg, ["relations", "mult-formula"]))
    b = dumps(run(cfg, ["mult-formula", "relations"], jobs=2))
    assert a == b
    assert "wall_time" not in a


def test_decompose_and_pipeline_verbs():
    runner = CliRunner()
    res = runner.invoke(main, ["decompose", "ore-f4.toml", "--m", "2"])
    assert res.exit_code == 0
    assert json.loads(res.output)["round_trip_residual"] == "inf"
    res = runner.invoke(main, ["pipeline", "sfoh", "F4-ramified.toml"])
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["ell"] == 2 and out["a"]["u"] == 0


@given(st.integers(2, 60))
def test_primality_gate(p):
    text = f"[instance]\np = {p}\n"
    from skewps.fields import is_prime

    if is_prime(p):
        assert parse_config(text).p == p
    else:
        with pytest.raises(ConfigError):
            parse_config(text)


def test_records_carry_registry_citation():
    rep = run(load_config("unit-diagonal.toml"))
    for rec in rep["records"]:
        assert rec["citation"] == BY_ID[rec["suite"]].citation
