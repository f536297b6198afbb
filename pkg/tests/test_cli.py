"""Command-line front end: exit codes, determinism, catalog overrides."""

import json
from jetcalc.cli import EX_BUDGET, EX_INTEGRITY, EX_OK, EX_USAGE, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_usage_errors(capsys):
    code, _, _ = run_cli(capsys, "derive", "--n", "0", "--kappa", "3")
    assert code == EX_USAGE
    code, _, _ = run_cli(capsys, "verify", "--catalog", "NOPE")
    assert code == EX_USAGE
    code, _, _ = run_cli(capsys, "chi", "--target", "schur")
    assert code == EX_USAGE


def test_derive_small_and_deterministic(capsys):
    code, out1, _ = run_cli(capsys, "derive", "--n", "2", "--kappa", "3")
    assert code == EX_OK
    doc = json.loads(out1)
    assert doc["terminated"] and len(doc["generators"]) == 5
    assert len(doc["syzygies"]) == 1
    code, out2, _ = run_cli(capsys, "derive", "--n", "2", "--kappa", "3")
    assert out1 == out2  # byte-identical report for identical config


def test_derive_bi_mode(capsys):
    code, out, _ = run_cli(capsys, "derive", "--n", "3", "--kappa", "3",
                           "--mode", "bi")
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["terminated"] and len(doc["generators"]) == 4
    assert doc["syzygies"] == []


def test_derive_budget_exhaustion(capsys):
    code, out, _ = run_cli(capsys, "derive", "--n", "2", "--kappa", "4",
                           "--budget-steps", "60")
    assert code == EX_BUDGET
    doc = json.loads(out)
    assert doc["terminated"] is False


def test_verify_pass(capsys):
    code, out, _ = run_cli(capsys, "verify", "--catalog", "E2k4")
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["syzygy_sets"]["fundamental"]["passed"] == 9
    assert doc["integrity_issues"] == []


def test_verify_corrupted_fixture(tmp_path, capsys, monkeypatch):
    from jetcalc.catalog import catalog_to_json, load_catalog

    doc = catalog_to_json(load_catalog("E2k3"))
    # corrupt one syzygy remainder but keep the checksum consistent
    doc["syzygies"]["fundamental"][0]["R"] = "2 * t:L5b"
    del doc["checksum"]
    from jetcalc.catalog import catalog_checksum

    doc["checksum"] = catalog_checksum(doc)
    path = tmp_path / "E2k3.json"
    path.write_text(json.dumps(doc))
    monkeypatch.setenv("JETCALC_CATALOG_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, "verify", "--catalog", "E2k3")
    assert code == EX_INTEGRITY
    report = json.loads(out)
    assert report["syzygy_sets"]["fundamental"]["failing"] == ["E2k3.1"]


def test_chi_rousseau(capsys):
    code, out, _ = run_cli(capsys, "chi", "--target", "rousseau-E33")
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["chi_m9_coefficient"]["numerator_coefficients"] == \
        ["0", "-358873", "185559", "-20739", "389"]
    assert doc["positivity_threshold"] == 43


def test_chi_schur_single(capsys):
    code, out, _ = run_cli(capsys, "chi", "--target", "schur", "--ell", "5,3,1")
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["ell"] == [5, 3, 1] and doc["dual"] is True
    code, out2, _ = run_cli(capsys, "chi", "--target", "schur", "--ell", "1,3,5")
    assert code == EX_USAGE


def test_text_format_and_output_file(tmp_path, capsys):
    out_path = tmp_path / "report.txt"
    code, out, _ = run_cli(capsys, "chi", "--target", "rousseau-E33",
                           "--format", "text", "--out", str(out_path))
    assert code == EX_OK and out == ""
    text = out_path.read_text()
    assert "positivity_threshold: 43" in text
