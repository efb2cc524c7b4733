import argparse
import csv
import json

import numpy as np
import pytest

from rmx.cli import main, parse_complex, read_document


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [
    ("0.2+0.1i", 0.2 + 0.1j), ("0.3-0.2i", 0.3 - 0.2j), ("1.5i", 1.5j), ("-2", -2),
    ("i", 1j), ("-i", -1j), ("1+i", 1 + 1j), ("1e-3-2.5e1i", 1e-3 - 25j), (".5i", 0.5j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["1 + 2i", "abc", "1+2j+3"])
def test_parse_complex_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(text)


def test_eval_sbar(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, stdout, _ = run(capsys, "eval", "--kind", "sbar", "--n", "2", "--z", "0.2+0.1i",
                          "--w", "0.3+0.2i", "--tau", "1.5i", "--out", str(out))
    assert code == 0 and "nonzero=8" in stdout
    doc = read_document(out)
    assert doc["matrix"].shape == (4, 4) and np.count_nonzero(doc["matrix"]) == 8
    assert doc["params"]["z"] == {"re": 0.2, "im": 0.1}
    assert doc["provenance"]["tool"].startswith("rmx ")


def test_eval_r_q_pattern(capsys):
    code, stdout, _ = run(capsys, "eval", "--kind", "r_q", "--n", "2", "--beta", "0.4", "--xi", "1.5",
                          "--hbar", "1", "--no-kappa")
    assert code == 0 and "nonzero=6" in stdout


def test_eval_real_w(capsys):
    code, _, _ = run(capsys, "eval", "--kind", "sbar", "--n", "2", "--z", "0.1", "--w", "0.5", "--tau", "1.5i")
    assert code == 0
    code, _, err = run(capsys, "eval", "--kind", "s_full", "--n", "2", "--v", "0.1", "--w", "0.5", "--tau", "1.5i")
    assert code == 2 and err.count("\n") == 1


def test_eval_pole_exit(capsys):
    code, _, err = run(capsys, "eval", "--kind", "sbar", "--n", "2", "--z", "0.1", "--w", "0", "--tau", "1.5i")
    assert code == 2 and err.startswith("rmx: error")


def test_eval_nonconvergent_exit(capsys, monkeypatch):
    from rmx.errors import NonConvergent

    def boom(*a, **k):
        raise NonConvergent("forced")
    monkeypatch.setattr("rmx.trig.kappa", boom)
    code, _, _ = run(capsys, "eval", "--kind", "r_q", "--n", "2", "--beta", "0.4")
    assert code == 3


def test_document_round_trip(capsys, tmp_path):
    argv = ["eval", "--kind", "r_dy", "--n", "3", "--beta", "0.37", "--xi", "1.8", "--hbar", "0.6"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, *argv, "--out", str(a))
    run(capsys, *argv, "--out", str(b))
    assert a.read_text() == b.read_text()
    doc = read_document(a)
    fresh = json.loads(b.read_text())["matrix"]
    re_encoded = [[{"re": x.real, "im": x.imag} for x in row] for row in doc["matrix"]]
    assert json.dumps(re_encoded) == json.dumps(fresh)


def test_document_validation(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"schema_version": "0.1", "kind": "sbar", "matrix": []}))
    from rmx.errors import DomainError
    with pytest.raises(DomainError):
        read_document(p)


def test_twist_document(capsys, tmp_path):
    out = tmp_path / "f.json"
    assert run(capsys, "eval", "--kind", "twist_f", "--n", "3", "--out", str(out))[0] == 0
    assert read_document(out)["matrix"].shape == (9, 9)


def test_env_tolerance(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RMX_DEFAULT_TOL", "1e-8")
    out = tmp_path / "s.json"
    run(capsys, "eval", "--kind", "sbar", "--n", "2", "--z", "0.1", "--w", "0.3i", "--out", str(out))
    assert json.loads(out.read_text())["truncation"]["tol"] == 1e-8


def test_check_twist(capsys, tmp_path):
    rep = tmp_path / "r.jsonl"
    code, stdout, _ = run(capsys, "check", "--suite", "twist", "--n", "3", "--seed", "11", "--report", str(rep))
    assert code == 0 and "30/30 checks passed" in stdout
    lines = rep.read_text().splitlines()
    assert len(lines) == 30 and all(json.loads(x)["passed"] for x in lines)


def test_check_tolerance_floor(capsys):
    code, stdout, _ = run(capsys, "check", "--suite", "all", "--n", "2", "--tol", "ybe=1e-15")
    assert code == 1 and "FAIL ybe" in stdout


def test_check_goldens_wrong_n(capsys):
    assert run(capsys, "check", "--suite", "goldens", "--n", "5")[0] == 2


def test_check_bad_override(capsys):
    assert run(capsys, "check", "--suite", "ybe", "--tol", "ybe")[0] == 2
    assert run(capsys, "check", "--suite", "ybe", "--tol", "nope=1")[0] == 2


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_scan_scaling(capsys, tmp_path):
    out = tmp_path / "s.csv"
    assert run(capsys, "scan", "--kind", "scaling", "--n", "2", "--steps", "4", "--out", str(out))[0] == 0
    rows = read_csv(out)
    assert len(rows) == 4 and list(rows[0]) == ["step", "point_re", "point_im", "error", "scalar_free_error"]
    errs = [float(r["error"]) for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_scan_ordinary(capsys, tmp_path):
    out = tmp_path / "o.csv"
    assert run(capsys, "scan", "--kind", "ordinary", "--n", "3", "--steps", "3", "--out", str(out))[0] == 0
    errs = [float(r["error"]) for r in read_csv(out)]
    assert len(errs) == 3 and errs[0] > errs[1] > errs[2]


def test_scan_stdout(capsys):
    code, stdout, _ = run(capsys, "scan", "--kind", "ordinary", "--steps", "2")
    assert code == 0 and stdout.splitlines()[0] == "step,point_re,point_im,error"


def test_scan_steps_one(capsys):
    assert run(capsys, "scan", "--kind", "scaling", "--steps", "1")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--kind", "nope", "--n", "2"])
    assert exc.value.code == 2
