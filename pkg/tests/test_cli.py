import json
import subprocess
import sys

import pytest

from cmtorsion.classdata import builtin_table, parse_table
from cmtorsion.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(out):
    lines = [l for l in out.splitlines() if l.strip()]
    return [json.loads(l) for l in lines]


def test_build_text(capsys):
    code, out, _ = run(capsys, "build", "--d", "15", "--p", "109")
    assert code == 0
    assert "m = 96" in out and "method = T3" in out


def test_build_json_keys_and_values(capsys):
    code, out, _ = run(capsys, "build", "--d", "88", "--p", "103", "--format", "json")
    assert code == 0
    (rec,) = as_json(out)
    assert set(rec) == {"D", "p", "U", "V", "m", "method", "j", "a4", "a6", "invariant_root"}
    assert rec["U"] == "18" and rec["method"] == "T11_RES"
    assert all(isinstance(v, str) or v is None for v in rec.values())


def test_build_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "build", "--d", "91", "--p", "571")
    _, js, _ = run(capsys, "build", "--d", "91", "--p", "571", "--format", "json")
    (rec,) = as_json(js)
    parsed = dict(line.split(" = ", 1) for line in text.splitlines())
    assert {k: (None if v == "-" else v) for k, v in parsed.items()} == rec


def test_build_pinned_j(capsys):
    code, out, _ = run(capsys, "build", "--d", "40", "--p", "41", "--j", "39", "--format", "json")
    assert code == 0 and as_json(out)[0]["U"] == "-2"


def test_build_baseline_for_163(capsys):
    code, out, _ = run(capsys, "build", "--d", "163", "--p", "167", "--format", "json")
    assert code == 0
    assert as_json(out)[0]["method"] == "BASELINE"


def test_build_exit_codes_and_no_partial_json(capsys):
    code, out, _ = run(capsys, "build", "--d", "15", "--p", "7", "--format", "json")
    assert code == 3 and out == ""
    code, out, err = run(capsys, "build", "--d", "23", "--p", "59", "--format", "json")
    assert code == 2 and out == "" and "no applicable method" in err
    code, out, _ = run(capsys, "build", "--d", "15", "--p", "100", "--format", "json")
    assert code == 1 and out == ""
    code, out, _ = run(capsys, "build", "--d", "15")
    assert code == 1 and out == ""
    code, out, _ = run(capsys, "frobnicate")
    assert code == 1


def test_table_file_and_env(capsys, tmp_path, monkeypatch):
    path = tmp_path / "t.txt"
    path.write_text("# gamma2 for D = 163\nD=163 inv=gamma2 deg=1 coeffs=640320;1\n")
    code, out, _ = run(capsys, "build", "--d", "163", "--p", "167", "--table", str(path), "--format", "json")
    assert code == 0
    assert as_json(out)[0]["invariant_root"] == str(-640320 % 167)
    monkeypatch.setenv("CM_CARDINAL_TABLE", str(path))
    code, out, _ = run(capsys, "build", "--d", "163", "--p", "167", "--format", "json")
    assert as_json(out)[0]["invariant_root"] == str(-640320 % 167)
    monkeypatch.delenv("CM_CARDINAL_TABLE")
    bad = tmp_path / "bad.txt"
    bad.write_text("D=23 inv=nope deg=1 coeffs=1;1\n")
    code, _, err = run(capsys, "build", "--d", "15", "--p", "109", "--table", str(bad))
    assert code == 1 and "line 1" in err
    monkeypatch.setenv("CM_CARDINAL_TABLE", str(bad))
    code, _, _ = run(capsys, "build", "--d", "15", "--p", "109")
    assert code == 1
    monkeypatch.setenv("CM_CARDINAL_TABLE", str(tmp_path / "missing.txt"))
    code, _, _ = run(capsys, "build", "--d", "15", "--p", "109")
    assert code == 1


def test_table_shadowing_changes_results(capsys, tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("D=15 inv=g3e12 deg=2 coeffs=729;81;1\n")
    code, out, _ = run(capsys, "build", "--d", "15", "--p", "109", "--table", str(path))
    assert code == 0 and "m = 96" in out


@pytest.mark.parametrize("D,p,U,V", [(15, 109, 14, 4), (20, 29, 6, 2), (40, 139, 14, 3)])
def test_cornacchia(capsys, D, p, U, V):
    code, out, _ = run(capsys, "cornacchia", "--d", str(D), "--p", str(p))
    assert code == 0 and out.split() == ["U", "=", str(U), "V", "=", str(V)]
    code, out, _ = run(capsys, "cornacchia", "--d", str(D), "--p", str(p), "--format", "json")
    assert as_json(out) == [{"D": str(D), "p": str(p), "U": str(U), "V": str(V)}]


def test_cornacchia_no_representation(capsys):
    code, out, _ = run(capsys, "cornacchia", "--d", "15", "--p", "7")
    assert code == 3 and out == ""


def test_tables_round_trip(capsys):
    code, out, _ = run(capsys, "tables")
    assert code == 0
    assert parse_table(out) == builtin_table()
    assert "D=40 inv=gamma2 deg=2 coeffs=20880;-780;1" in out
    assert "(X^2+13*X+49)*(X^2+5*X+1)^3 - J*X" in out


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--format", "json")
    recs = as_json(out)
    lines = "\n".join(r["line"] for r in recs if "line" in r)
    assert parse_table(lines) == builtin_table()
    assert {r["ell"] for r in recs if "ell" in r} == {"2", "3", "5", "7"}


def test_verify(capsys):
    assert run(capsys, "verify", "--d", "15", "--p", "109", "--u", "14")[0] == 0
    assert run(capsys, "verify", "--d", "15", "--p", "109", "--u", "-14")[0] != 0
    assert run(capsys, "verify", "--d", "15", "--p", "109", "--u", "13")[0] != 0
    assert run(capsys, "verify", "--d", "15", "--p", "109")[0] == 1
    assert run(capsys, "verify", "--d", "15", "--p", "109", "--u", "14", "--trials", "0")[0] == 1


def _verdicts(out):
    return [l.split(":")[0] for l in out.splitlines()]


def test_selfcheck_default(capsys):
    code, out, _ = run(capsys, "selfcheck")
    assert code == 0
    lines = out.splitlines()
    assert sum(1 for l in lines if l.startswith("PASS instance")) >= 14
    assert all(l.startswith("PASS") for l in lines)


def test_selfcheck_seed_independent(capsys):
    _, a, _ = run(capsys, "selfcheck", "--seed", "1")
    _, b, _ = run(capsys, "selfcheck", "--seed", "2")
    assert _verdicts(a) == _verdicts(b)


def test_selfcheck_detects_corrupted_table(capsys, tmp_path):
    path = tmp_path / "corrupt.txt"
    path.write_text("D=35 inv=g5e6 deg=2 coeffs=126;50;1\n")
    code, out, _ = run(capsys, "selfcheck", "--table", str(path))
    assert code != 0
    assert any(l.startswith("FAIL instance D=35") for l in out.splitlines())


def test_selfcheck_json(capsys):
    code, out, _ = run(capsys, "selfcheck", "--format", "json")
    recs = as_json(out)
    assert code == 0 and all(r["ok"] is True for r in recs)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cmtorsion.cli", "build", "--d", "20", "--p", "29",
                           "--j", "23"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "U = -6" in proc.stdout
