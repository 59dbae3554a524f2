import csv
import json

import pytest

from sosident.cli import SWEEP_COLUMNS, main, parse_range, row_seed


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_identifiable_certified(capsys):
    code, out, _ = run(capsys, "identifiable", "--n", "2", "--d", "6", "--r", "2")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "Certified"
    assert {"n", "d", "r", "p", "seed", "mode"} <= rep.keys()


def test_identifiable_inconclusive(capsys):
    code, out, _ = run(capsys, "identifiable", "--n", "1", "--d", "6", "--r", "2")
    assert code == 1 and json.loads(out)["verdict"] == "Inconclusive"


def test_identifiable_odd_degree(capsys):
    code, out, err = run(capsys, "identifiable", "--n", "2", "--d", "5", "--r", "2")
    assert code == 2 and out == "" and "OddDegree" in err


def test_identifiable_specific_forms(tmp_path, capsys):
    forms = [{"n": 2, "d": 3, "p": 101, "terms": [{"exp": e, "c": 1}]}
             for e in ([3, 0, 0], [0, 3, 0], [0, 0, 3])]
    path = tmp_path / "forms.json"
    path.write_text(json.dumps(forms))
    code, out, _ = run(capsys, "identifiable", "--forms", str(path))
    rep = json.loads(out)
    assert code == 0
    assert (rep["terracini_rank"], rep["hessian_rank"], rep["mode"]) == (27, 7, "Specific")


def test_dimension_examples(capsys):
    code, out, _ = run(capsys, "dimension", "--n", "2", "--d", "6", "--r", "3")
    rep = json.loads(out)
    assert code == 0 and rep["observed_rank"] == 27
    code, out, _ = run(capsys, "dimension", "--n", "3", "--d", "4", "--r", "5")
    rep = json.loads(out)
    assert code == 0 and rep["observed_rank"] == rep["ambient_dim"] == 35
    code, out, err = run(capsys, "dimension", "--n", "3", "--d", "4", "--r", "6")
    assert code == 0 and "generic rank" in err
    assert json.loads(out)["verdict"] == "NonDefectiveCertified"


def test_modulus_env_echoed(monkeypatch, capsys):
    monkeypatch.setenv("SOSIDENT_MODULUS", "103")
    code, out, _ = run(capsys, "dimension", "--n", "2", "--d", "4", "--r", "2")
    assert json.loads(out)["p"] == 103
    code, out, _ = run(capsys, "dimension", "--n", "2", "--d", "4", "--r", "2", "--modulus", "107")
    assert json.loads(out)["p"] == 107


def test_json_output_path(tmp_path, capsys):
    path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "dimension", "--n", "2", "--d", "4", "--r", "2", "--json", str(path))
    assert out == "" and json.loads(path.read_text())["observed_rank"] == 11


def test_sweep_identifiable(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "2", "--d-range", "4,6,8")
    rows = json.loads(out)
    assert code == 0
    assert [(r["d"], r["r"]) for r in rows] == [(4, 1), (4, 2), (6, 1), (6, 2), (6, 3),
                                               (8, 1), (8, 2), (8, 3)]
    assert all(r["verdict"] == "Certified" for r in rows)
    assert all(r["seed"] == row_seed(0, r["n"], r["d"], r["r"]) for r in rows)


def test_sweep_dimension_csv(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "sweep", "--check", "dimension", "--d", "4", "--n-range", "2:6",
                       "--csv", str(path))
    assert code == 0 and out == ""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        assert reader.fieldnames == SWEEP_COLUMNS
        rows = list(reader)
    assert {r["verdict"] for r in rows} == {"NonDefectiveCertified"}
    assert len(rows) == sum({2: 3, 3: 5, 4: 6, 5: 7, 6: 9}.values())


def test_sweep_empty_range(capsys):
    code, out, _ = run(capsys, "sweep", "--n-range", "", "--d", "4")
    assert code == 0 and json.loads(out) == []


def test_sweep_row_errors_recorded(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "2", "--d", "5")
    rows = json.loads(out)
    assert code == 0 and rows[0]["verdict"].startswith("Error: OddDegree")


def test_sweep_byte_identical_across_runs_and_workers(capsys):
    argv = ["sweep", "--n-range", "2:3", "--d-range", "4,6", "--seed", "5"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv, "--workers", "3")
    assert a == b == c


def test_identifiable_byte_identical(capsys):
    argv = ["identifiable", "--n", "3", "--d", "4", "--r", "3", "--seed", "11", "--hessian", "full"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_parse_range():
    assert parse_range("4,6,8") == [4, 6, 8]
    assert parse_range("2:6") == [2, 3, 4, 5, 6]
    assert parse_range("4:12:2") == [4, 6, 8, 10, 12]
    assert parse_range("") == []


def test_row_seed_stable():
    assert row_seed(0, 2, 4, 1) == row_seed(0, 2, 4, 1)
    assert row_seed(0, 2, 4, 1) != row_seed(1, 2, 4, 1)
    assert 0 <= row_seed(3, 9, 9, 9) < 2**63


def test_binary_orbits(capsys):
    code, out, _ = run(capsys, "binary-orbits", "--factors", "[[1,0],[0,1],[1,1],[1,2]]")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 3 and rep["all_distinct"]
    assert len({row["gram_hash"] for row in rep["decompositions"]}) == 3
    code, out, _ = run(capsys, "binary-orbits", "--factors", "[[1,0],[0,1]]")
    assert code == 0 and json.loads(out)["count"] == 1
    code, _, err = run(capsys, "binary-orbits", "--factors", "[[1,0],[0,1],[1,1]]")
    assert code == 2


def test_catalecticant(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"n": 2, "d": 6, "p": 101, "terms": [{"exp": [6, 0, 0], "c": 1}]}))
    code, out, _ = run(capsys, "catalecticant", "--poly", str(path))
    assert code == 0 and json.loads(out)["rank"] == 1
    code, out, _ = run(capsys, "catalecticant", "--random", "--n", "2", "--d", "6")
    assert json.loads(out)["rank"] == 10
    code, out, _ = run(capsys, "catalecticant", "--poly", str(path), "--i", "1", "--dump")
    lines = out.splitlines()
    assert lines[0] == "3 21 101" and len(lines) == 4


@pytest.mark.parametrize("text", ["{", '{"n": 2}', '{"n": 2, "d": 2, "p": 101, "terms": [{"exp": [1, 1], "c": 1}]}',
                                  '{"n": 1, "d": 2, "p": 100, "terms": []}'])
def test_catalecticant_malformed(tmp_path, capsys, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, _, err = run(capsys, "catalecticant", "--poly", str(path))
    assert code == 2 and "MalformedPolynomial" in err
