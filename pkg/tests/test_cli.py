import json
import os
import subprocess
import sys

import pytest

from hecke_massey import jsonio
from hecke_massey.cli import main
from hecke_massey.geometry import DegreeTriple, ZERO_PARAMS
from hecke_massey.massey import f_from_system, mp_coefficient
from conftest import kernel

CLI = [sys.executable, "-m", "hecke_massey.cli"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(jsonio.dumps(obj))
    return str(p)


ZERO_F = {"support": {"basis": [["1", "0"], ["0", "1"]]}, "period": {"basis": [["1", "0"], ["0", "1"]]}, "values": []}


def test_series_zero(tmp_path, capsys):
    code, out, _ = run(capsys, "series", "--form", "1", "3/2", "1", "--f", write(tmp_path, "f.json", ZERO_F))
    assert code == 0 and out.strip() == "0"


def test_series_bad_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"support": [1, 2,,]}')
    code, _, err = run(capsys, "series", "--form", "1", "3/2", "1", "--f", str(p))
    assert code == 2 and "line 1 column" in err


def test_series_fixture_matches_mp(tmp_path, capsys):
    t = DegreeTriple.of(2, 2, 3)
    c = kernel((2, 2, 3)).basis[1]
    f = f_from_system(t, ZERO_PARAMS, c, 0)
    code, out, _ = run(capsys, "series", "--degrees", "2", "2", "3", "--f", write(tmp_path, "f.json", f),
                       "--truncation", "6", "--check-f-condition", "--output", "json")
    assert code == 0
    assert jsonio.qseries_from_json(json.loads(out)) == mp_coefficient(t, ZERO_PARAMS, c, 0, 6)


def test_series_f_condition_violation(tmp_path, capsys):
    f = dict(ZERO_F, values=[[["0", "0"], "1"]])
    code, _, _ = run(capsys, "series", "--degrees", "2", "2", "3", "--f", write(tmp_path, "f.json", f),
                     "--check-f-condition")
    assert code == 3


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "--degrees", "2", "4", "5", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["basis"] == [] and "necessary condition fails" in rep["notes"]
    code, out, _ = run(capsys, "solve", "--degrees", "2", "2", "3", "--output", "json")
    assert code == 0 and json.loads(out)["dimension"] == 4
    code, out, _ = run(capsys, "solve", "--degrees", "2", "2", "3", "--params", "1/3", "1/3", "1/4", "1/4")
    assert code == 0 and "dimension 1" in out


def test_missing_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["solve"])
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_verify_thm1_fixture_and_mutation(tmp_path, capsys):
    c = kernel((2, 2, 3)).basis[0]
    code, out, _ = run(capsys, "verify-thm1", "--tensor", write(tmp_path, "c.json", c))
    assert code == 0 and "PASS" in out
    key = sorted(c.entries)[0]
    bad = c.with_entry(key, -c.entries[key])
    code, out, _ = run(capsys, "verify-thm1", "--tensor", write(tmp_path, "bad.json", bad))
    assert code == 4 and "failing l: [0]" in out
    code, out, _ = run(capsys, "verify-thm1", "--degrees", "2", "2", "3", "--trunc", "4")
    assert code == 0 and out.count("PASS") == 4


def test_invert_cap(capsys):
    code, out, err = run(capsys, "invert", "--form", "1", "3/2", "1", "--antisymmetrize", "4", "0", "1", "--cap", "1")
    assert code == 5 and "NOT-FOUND" in err
    assert json.loads(out)["diagnostics"]["forced_base"] == 6


def test_invert_closed_loop(tmp_path, capsys):
    from hecke_massey.geometry import delta_plane_period
    from hecke_massey.massey import aggregate_f

    t = DegreeTriple.of(2, 2, 3)
    f = aggregate_f(t, kernel((2, 2, 3), True).basis[1], delta_plane_period(t))
    code, out, _ = run(capsys, "invert", "--form", "2/3", "4/3", "2/3", "--f", write(tmp_path, "f.json", f),
                       "--trunc", "6", "--output", "json")
    rep = json.loads(out)
    assert code == 0 and rep["N"] == 1 and rep["equality"] and rep["massey_system"]
    assert set(rep) >= {"rescale", "degrees", "N", "tensor", "equality", "order"}


def test_lattice_info(capsys):
    code, out, _ = run(capsys, "lattice-info", "--degrees", "2", "2", "3", "--output", "json")
    info = json.loads(out)
    assert code == 0 and info["index_gamma_lambda"] == 12 and info["necessary_condition"]
    code, _, err = run(capsys, "lattice-info", "--degrees", "2", "2", "4")
    assert code == 2 and "input error" in err


def test_deterministic_subprocess():
    args = CLI + ["solve", "--degrees", "3", "3", "4", "--output", "json"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["dimension"] == 7


def test_cyclo_cap_env(tmp_path):
    f = dict(ZERO_F, period={"basis": [["2", "0"], ["0", "2"]]},
             values=[[["1", "0"], {"order": 5, "coeffs": ["0", "1", "0", "0"]}]])
    p = write(tmp_path, "f.json", f)
    env = dict(os.environ, HM_MAX_CYCLO_ORDER="4")
    r = subprocess.run(CLI + ["series", "--form", "1", "3/2", "1", "--f", p], capture_output=True, env=env)
    assert r.returncode == 5, r.stderr
    r = subprocess.run(CLI + ["series", "--form", "1", "3/2", "1", "--f", p], capture_output=True)
    assert r.returncode == 0
