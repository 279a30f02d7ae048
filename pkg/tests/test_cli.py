import json

import jsonschema
import pytest

from liebialg.catalog import DATA_ENV
from liebialg.cli import RunConfig, load_schema, main, run


def invoke(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_catalog_validate_passes(capsys):
    status, out, _ = invoke(capsys, "catalog", "validate", "--json")
    report = json.loads(out)
    assert status == 0 and report["ok"]
    assert report["summary"] == {"entries": 56, "failed": 0}


def test_classify_single_entry(capsys):
    status, out, _ = invoke(capsys, "classify", "--entry", "(IX,V|b)", "--param", "b=1", "--json")
    report = json.loads(out)
    assert status == 0
    assert report["results"][0]["verdict"] == "quasitriangular"
    assert report["results"][0]["omega"] == "1"


def test_classify_all_csv_has_one_row_per_listed_r(capsys):
    status, out, _ = invoke(capsys, "classify", "--all", "--format", "csv")
    lines = out.strip().splitlines()
    assert status == 0
    assert lines[0].startswith("group,entry,verdict")
    assert len(lines) == 33


def test_unknown_entry_and_bad_parameters(capsys):
    assert invoke(capsys, "classify", "--entry", "(X,I)")[0] == 2
    assert invoke(capsys, "classify", "--entry", "(VI_a,II)", "--param", "a=1")[0] == 2
    assert invoke(capsys, "classify", "--entry", "(IX,V|b)", "--param", "q=1")[0] == 2
    assert invoke(capsys, "lax", "--entry", "(VIII,V.i|b)")[0] == 2


def test_iso_reports_obstruction(capsys):
    status, out, _ = invoke(capsys, "iso", "--pair", "(VIII,V.i|b)", "(VIII,V.ii|b)", "--json")
    rec = json.loads(out)["results"][0]
    assert status == 0
    assert rec["verdict"] == "not-isomorphic" and rec["obstruction"]


def test_aut_verify_exit_status_follows_checks(capsys):
    assert invoke(capsys, "aut", "verify", "--algebra", "IX")[0] == 0
    assert invoke(capsys, "aut", "verify", "--algebra", "VII0")[0] == 1


def test_poisson_latex(capsys):
    status, out, _ = invoke(capsys, "poisson", "--entry", "(IX,V|b)", "--param", "b=1", "--latex")
    assert status == 0
    assert out.count("\\\\") == 3 and "\\tan" in out


def test_poisson_rejects_foreign_r(capsys):
    assert invoke(capsys, "poisson", "--entry", "(IX,V|b)", "--r", "w(1,2)")[0] == 2


def test_tables_verify_bracket_cells(capsys):
    status, out, _ = invoke(capsys, "tables", "verify", "--which", "6", "--report", "json")
    report = json.loads(out)
    jsonschema.validate(report, load_schema())
    assert len(report["results"]) == 6
    assert sum(len(r["cells"]) for r in report["results"]) == 18
    assert status == (0 if report["ok"] else 1)


def test_lax_csv(capsys):
    status, out, _ = invoke(capsys, "lax", "--entry", "(IX,V|b)", "--param", "b=1", "--dt", "0.01", "--csv")
    lines = out.strip().splitlines()
    assert status == 0
    assert lines[0] == "t,xi1,xi2,xi3,residual,drift"
    assert len(lines) == 102


def test_reports_are_deterministic():
    cfg = RunConfig("tables verify", which=("3", "4"), format="json")
    assert run(cfg) == run(cfg)
    cfg = RunConfig("classify", all=True, format="csv")
    assert run(cfg) == run(cfg)


def test_schema_rejects_malformed_report():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"command": "classify", "ok": True, "seed": 0,
                             "results": [{"entry": "x", "verdict": "maybe"}]}, load_schema())


def test_missing_fixture_directory(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv(DATA_ENV, str(tmp_path / "nowhere"))
    status, _, err = invoke(capsys, "catalog", "validate")
    assert status == 2 and DATA_ENV in err


def test_export_classification_latex(capsys):
    status, out, _ = invoke(capsys, "export", "--what", "classification", "--format", "latex")
    assert status == 0
    assert out.startswith("\\begin{tabular}") and "VII\\_o" in out
