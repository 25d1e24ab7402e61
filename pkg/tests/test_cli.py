import json

import jsonschema
import pytest

from higgs_hahn.cli import main

NUM_LIST = {"type": "array", "items": {"type": "number"}}
SECTOR_SCHEMA = {
    "type": "object",
    "required": ["energy", "level_dimension", "sectors", "tolerances"],
    "properties": {
        "sectors": {"type": "array", "items": {
            "type": "object",
            "required": ["energy", "m1", "m2", "size", "k1_spectrum", "jacobi", "k2_spectrum",
                         "off_band", "dual_off_band", "overlaps", "hahn", "pass"],
            "properties": {
                "jacobi": {"type": "object", "required": ["diagonal", "off_diagonal"],
                           "properties": {"diagonal": NUM_LIST, "off_diagonal": NUM_LIST}},
                "overlaps": {"type": "object", "required": ["real", "imag", "unitarity_error"],
                             "properties": {"real": {"type": "array", "items": NUM_LIST},
                                            "imag": {"type": "array", "items": NUM_LIST}}},
                "hahn": {"type": "object", "required": ["fit", "overlap_deviation", "pass"]},
                "pass": {"type": "boolean"},
            }}},
        "tolerances": {"type": "object", "required": ["identity", "eigen"]},
    },
}
VERIFY_SCHEMA = {
    "type": "object",
    "required": ["suite", "identities", "passed", "failed", "tolerances"],
    "properties": {"identities": {"type": "array", "items": {
        "type": "object", "required": ["name", "citation", "pass", "residual_terms", "ms"]}}},
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all")
    assert code == 0
    last = out.strip().splitlines()[-1]
    n = int(last.split()[0])
    assert last == f"{n} identities, {n} passed"


def test_verify_json_schema(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--suite", "higgs", "--json", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, VERIFY_SCHEMA)
    assert doc["failed"] == 0 and doc["tolerances"]["identity"] == 1e-9


def test_verify_diffop_records_casimirs(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "diffop", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and set(doc["recorded"]) == {"casimir_1", "casimir_2"}


@pytest.mark.parametrize("argv", [["verify", "--suite", "nosuch"], ["verify", "--bogus"],
                                  ["sector"], ["sector", "--energy", "1"],
                                  ["residuals", "--cutoff", "3"],
                                  ["residuals", "--suite", "diffop"],
                                  ["sector", "--energy", "14"],
                                  ["sector", "--energy", "6", "--m1", "0.3"],
                                  ["sector", "--energy", "6", "--m1", "7"], []])
def test_usage_errors(argv, capsys, tmp_path):
    path = tmp_path / "never.json"
    code, out, err = run(capsys, *argv, "--json", str(path)) if argv else run(capsys)
    assert code == 2
    assert err and not out
    assert not path.exists()


def test_sector_json(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _, _ = run(capsys, "sector", "--energy", "6", "--overlaps", "--json", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SECTOR_SCHEMA)
    assert sum(s["size"] for s in doc["sectors"]) == doc["level_dimension"] == 35
    big = [s for s in doc["sectors"] if s["size"] == 3]
    assert len(big) == 1 and big[0]["hahn"]["fit"]["N"] == 2


def test_sector_filter(capsys):
    code, out, _ = run(capsys, "sector", "--energy", "8", "--m1", "0", "--m2", "0",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and [(s["m1"], s["m2"]) for s in doc["sectors"]] == [(0, 0)]


def test_deterministic_json(tmp_path, capsys):
    texts = []
    for k in range(2):
        path = tmp_path / f"{k}.json"
        assert run(capsys, "sector", "--energy", "7", "--overlaps", "--json", str(path))[0] == 0
        texts.append(path.read_bytes())
        path = tmp_path / f"v{k}.json"
        assert run(capsys, "verify", "--suite", "o4", "--no-timing", "--json", str(path))[0] == 0
        texts.append(path.read_bytes())
    assert texts[0] == texts[2] and texts[1] == texts[3]


def test_overlaps_command(capsys):
    code, out, _ = run(capsys, "overlaps", "--energy", "9", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["failed"] == 0
    fits = [s for s in doc["sectors"] if s["fit"]]
    assert fits and all(s["overlap_deviation"] <= 1e-8 for s in fits)


def test_residuals_command(capsys):
    code, out, _ = run(capsys, "residuals", "--suite", "o4", "--cutoff", "6", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["cutoff"] == 6 and doc["max_residual"] <= 1e-9


def test_tight_tolerance_fails_with_exit_1(capsys):
    code, out, _ = run(capsys, "residuals", "--suite", "higgs", "--tol-identity", "1e-30")
    assert code == 1 and "FAIL" in out


def test_dump_catalog(capsys):
    code, out, _ = run(capsys, "dump-catalog", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["N(1)"] == "(1)+(0)i * ad(1) a(1)"
    assert "K2" in doc and "J+^(1234)" in doc


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--energy", "6", "--suite", "higgs")
    assert code == 0
    assert out.startswith("verify: ")
