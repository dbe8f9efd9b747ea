import csv
import io
import json
import os
from importlib import resources

import pytest

from explicit_zeta import harness
from explicit_zeta.cli import main, read_config, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- tables ------------------------------------------------------------------

def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables")
    assert code == 0
    rep = json.loads(out)
    assert rep["suite"] == "tables"
    assert len(rep["cases"]) == 36
    for case in rep["cases"]:
        assert tuple(case) == harness.CASE_KEYS
        assert case["status"] == "PASS"
    by_name = {c["name"]: c for c in rep["cases"]}
    assert by_name["table.2pi.x<=y.E"]["derived"] == 36.094
    assert by_name["table.2pi.x<=y.E_tilde"]["derived"] == 36.214
    assert by_name["table.1e3.x>y.F"]["derived"] == 15.726


def test_tables_formats_agree(capsys):
    _, js, _ = run(capsys, "tables", "--format", "json")
    _, cs, _ = run(capsys, "tables", "--format", "csv")
    _, tx, _ = run(capsys, "tables", "--format", "text")
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert [r["name"] for r in rows] == [c["name"] for c in json.loads(js)["cases"]]
    assert cs.splitlines()[0].split(",") == ["suite", *harness.CASE_KEYS]
    assert "\r\n" in cs
    assert "36.214" in tx


# --- constants ---------------------------------------------------------------

@pytest.mark.parametrize("target", ["r0", "stirling", "eafesq", "espm", "thm-main"])
def test_constants_pass(capsys, target):
    code, out, _ = run(capsys, "constants", target)
    assert code == 0
    assert all(c["status"] == "PASS" for c in json.loads(out)["cases"])


def test_constants_thm_main_values(capsys):
    _, out, _ = run(capsys, "constants", "thm-main")
    d = {c["name"]: c for c in json.loads(out)["cases"]}
    assert d["thm-main.a"]["derived"] == 10395.2
    assert d["thm-main.alpha"]["derived"] < 15291.986


def test_constants_envelope_reports_limit_gap(capsys):
    # the S2 value at T0 = 1e12 sits outside 5% of its limit: a genuine violation
    code, out, _ = run(capsys, "constants", "envelope")
    assert code == 2
    failed = [c["name"] for c in json.loads(out)["cases"] if c["status"] != "PASS"]
    assert failed == ["envelope.S2.limit"]


def test_constants_unknown_target(capsys):
    code, _, err = run(capsys, "constants", "bogus")
    assert code == 3 and "invalid choice" in err


# --- verify ------------------------------------------------------------------

def test_verify_zeros(capsys):
    code, out, _ = run(capsys, "verify", "zeros")
    assert code == 0
    names = [c["name"] for c in json.loads(out)["cases"]]
    assert "zeros.N20" in names and "zeros.N100" in names


def test_verify_density(capsys):
    code, out, _ = run(capsys, "verify", "density")
    assert code == 0
    assert all(c["status"] == "PASS" for c in json.loads(out)["cases"])


def test_verify_reproducible(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# short sampling run\nafe_samples = 25\n", encoding="utf-8")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "afe", "--seed", "7", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["verify", "afe", "--seed", "7", "--config", str(cfg), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    cases = json.loads(a.read_text())["cases"]
    assert [c["samples"] for c in cases] == [25, 25]
    capsys.readouterr()


def test_verify_seed_changes_witness(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("afe_samples = 10\n", encoding="utf-8")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "afe", "--seed", "1", "--config", str(cfg), "--out", str(a)])
    main(["verify", "afe", "--seed", "2", "--config", str(cfg), "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


# --- moment / density / zeros ---------------------------------------------------

def test_moment_35(capsys):
    code, out, _ = run(capsys, "moment", "35")
    assert code == 0
    case = json.loads(out)["cases"][0]
    assert case["derived"] <= 67 and case["margin"] > 0


def test_moment_zero(capsys):
    code, out, _ = run(capsys, "moment", "0")
    case = json.loads(out)["cases"][0]
    assert code == 0 and case["derived"] == 0 and case["published"] >= 0


def test_moment_too_large(capsys):
    code, _, _ = run(capsys, "moment", "2e5")
    assert code == 3


def test_moment_components(capsys):
    code, out, _ = run(capsys, "moment", "1000", "--components", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["name", "value"]
    names = [r[0] for r in rows[1:]]
    assert "S1" in names and "S2" in names


def test_density_csv_columns(capsys):
    code, out, _ = run(capsys, "density", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["sigma", "T", "bound"]
    assert len(rows) > 1 and all(float(r[2]) > 0 for r in rows[1:])


def test_density_json_coefficients(capsys):
    _, out, _ = run(capsys, "density")
    co = json.loads(out)["coefficients"]
    assert co["rounded"] == {"a": 10395.2, "b": 1.104, "c": 0.173, "d": 0.51}
    assert co["alpha"] < 15291.986


def test_zeros_explicit_grid(capsys):
    code, out, _ = run(capsys, "zeros", "20", "100", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["T", "N", "rvm_lo", "rvm_hi"]
    assert [int(r[1]) for r in rows[1:]] == [1, 29]


# --- configuration ---------------------------------------------------------------

def test_out_file(tmp_path, capsys):
    dest = tmp_path / "t.csv"
    assert main(["tables", "--format", "csv", "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    assert dest.read_bytes().startswith(b"suite,name,")


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("format = text  # comment\n\nseed = 3\n", encoding="utf-8")
    _, out, _ = run(capsys, "tables", "--config", str(cfg))
    assert out.startswith("# tables")
    _, out, _ = run(capsys, "tables", "--config", str(cfg), "--format", "json")
    assert json.loads(out)["suite"] == "tables"


def test_read_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config(str(bad))
    bad.write_text("no equals sign\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config(str(bad))
    with pytest.raises(UsageError):
        read_config(str(tmp_path / "missing.cfg"))


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("seed = many\n", encoding="utf-8")
    assert run(capsys, "tables", "--config", str(bad))[0] == 3


def test_precision_gate(capsys, monkeypatch):
    assert run(capsys, "tables", "--precision", "10")[0] == 3
    monkeypatch.setenv("EXPLICIT_ZETA_PRECISION", "12")
    assert run(capsys, "tables")[0] == 3
    assert run(capsys, "tables", "--precision", "40")[0] == 0
    assert os.environ["EXPLICIT_ZETA_PRECISION"] == "12"


def test_usage_error_exit_code(capsys):
    assert run(capsys)[0] == 3
    assert run(capsys, "tables", "--format", "xml")[0] == 3


# --- goldens ------------------------------------------------------------------

def test_golden_integrity():
    text = resources.files("explicit_zeta").joinpath("data/goldens.json").read_text("utf-8")
    values = json.loads(text)["constants"]
    names = [g["name"] for g in values]
    assert len(names) == len(set(names))
    locations = [g["location"] for g in values]
    assert all(loc for loc in locations)
    assert len(locations) == len(set(locations))
    for g in values:
        assert g["relation"] in {"roundup", "upper", "lower", "approx", "approx_rel", "exact"}


def test_goldens_cover_acceptance_constants():
    entries = harness.load_goldens()
    for name in ("r0.argmin", "r0.min", "stirling.sup", "eafesq.general", "eafesq.line",
                 "envelope.S1.1e3", "envelope.S2.H0", "espm.c1", "espm.c2", "espm.integral35",
                 "espm.integral2000", "thm-main.alpha", "thm-main.a", "thm-main.a.1e50",
                 "thm-main.floor", "mollifier.lambda_hat", "zeros.N20", "zeros.N100"):
        assert name in entries
