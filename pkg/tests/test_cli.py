import json

import pytest

from bbgkz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lattice_saturation_fact_exits_zero(capsys):
    code, out, _ = run(capsys, "lattice", "A23", "--saturation")
    assert code == 0
    assert "saturated: false" in out and "witness: [1]" in out


def test_lattice_interior(capsys, tmp_path):
    path = tmp_path / "local-p2.json"
    path.write_text(json.dumps({"points": [[1, 0, 1], [0, 1, 1], [-1, -1, 1], [0, 0, 1]]}))
    code, out, _ = run(capsys, "lattice", str(path), "--interior", "0,0,1")
    assert code == 0 and "interior [0, 0, 1]: true" in out


def test_empty_file_is_input_error(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    code, _, err = run(capsys, "lattice", str(path))
    assert code == 2 and "empty" in err


def test_malformed_json_reports_location(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"points": [[1, 2],\n')
    code, _, err = run(capsys, "lattice", str(path))
    assert code == 2 and "line" in err


def test_bad_vector_is_input_error(capsys):
    code, _, err = run(capsys, "lattice", "A23", "--interior", "1,x")
    assert code == 2


def test_gkz_lambda(capsys):
    code, out, _ = run(capsys, "gkz", "A23", "--gamma", "0", "--lambda")
    assert code == 0 and "l^3*dx1^3 - l^2*dx2^2" in out


def test_gkz_trivial_intertwiner(capsys):
    code, out, _ = run(capsys, "gkz", "gauss", "--intertwine", "1,1", "1,1")
    assert code == 0 and "b: [0, 0, 0]" in out


def test_gkz_series_and_residual(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "gkz", "gauss", "--series", "0,0,0", "--log", "1,-2,1", "--radius", "7",
                     "--save", str(path))
    assert code == 0
    code, out, _ = run(capsys, "gkz", "gauss", "--residual", str(path), "1,1,0.01")
    assert code == 0 and "check residual < 1e-08: pass" in out
    code, out, _ = run(capsys, "gkz", "gauss", "--residual", str(path), "1,1,0.01", "--tol", "1e-12")
    assert code == 1


def test_nondeg(capsys):
    code, out, _ = run(capsys, "nondeg", "gauss", "--coeffs", "1,-2,1")
    assert code == 0 and "nondegenerate: false" in out and "[1, 2, 3] dim 1: FAILS" in out


def test_cohom_json_is_deterministic(capsys):
    _, first, _ = run(capsys, "--json", "cohom", "P2", "--beta", "1,1,1")
    _, second, _ = run(capsys, "cohom", "P2", "--beta", "1,1,1", "--json")
    data = json.loads(first)
    assert data["schema"] == "bbgkz.report/1"
    assert first == second.replace('"cohom",\n    "P2",\n    "--beta",\n    "1,1,1",\n    "--json"',
                                   '"--json",\n    "cohom",\n    "P2",\n    "--beta",\n    "1,1,1"')
    assert data["facts"]["jordan_type"] == [4, 1, 1]
    assert data["passed"] is True


def test_cohom_with_quantum_table(capsys, tmp_path):
    from bbgkz.quantum import p1_small_quantum_table

    path = tmp_path / "p1.json"
    path.write_text(json.dumps(p1_small_quantum_table(4).to_json()))
    code, out, _ = run(capsys, "cohom", "P1", "--quantum", str(path))
    assert code == 0 and "check quantum.flat: pass" in out


def test_cohom_non_smooth_fan(capsys, tmp_path):
    path = tmp_path / "fan.json"
    path.write_text(json.dumps({"rays": [[1, 0], [1, 2], [-1, -1]], "cones": [[0, 1], [1, 2], [0, 2]]}))
    code, _, err = run(capsys, "cohom", str(path))
    assert code == 2 and "not smooth" in err


def test_tep_random(capsys):
    code, out, _ = run(capsys, "tep", "--random", "4", "--seed", "3")
    assert code == 0 and "FAIL" not in out


def test_demo(capsys):
    code, out, err = run(capsys, "demo")
    assert code == 0
    assert "timings:" in err and "timings" not in out


def test_demo_json(capsys):
    code, out, _ = run(capsys, "demo", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and "failed_stage" not in data


def test_demo_wrong_beta_fails(capsys):
    code, out, _ = run(capsys, "demo", "--beta", "1,1,0")
    assert code == 1
    assert "nef: true" in out and "failed stage: cohomology" in out


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
