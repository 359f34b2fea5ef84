import json
import os

import numpy as np
import pytest

from binlsq.cli import main
from binlsq.files import read_matrix, read_vector


def _generate(tmp_path, *extra, name="gen"):
    out = tmp_path / name
    out.mkdir()
    assert main(["generate", "--out", str(out), *extra]) == 0
    return out


def _solve(capsys, out, *extra, rhs="b.csv"):
    capsys.readouterr()
    code = main(["solve", str(out / "A.csv"), str(out / rhs), *extra])
    return code, capsys.readouterr()


def test_generate_paper1(tmp_path, capsys):
    out = _generate(tmp_path, "--family", "paper1", "--noise", "0")
    first = (out / "A.csv").read_text().splitlines()[0].split(",")
    assert float(first[0]) == pytest.approx(0.81381, abs=5e-6)
    A = read_matrix(out / "A.csv")
    assert A.shape == (10, 3)
    assert sorted(os.listdir(out)) == ["A.csv", "b.csv", "b_noisy.csv", "noise.csv",
                                       "spec.json", "x_planted.csv"]


def test_generate_is_deterministic(tmp_path):
    a = _generate(tmp_path, "--family", "paper2", "--noise", "0.2", "--seed", "7", name="a")
    b = _generate(tmp_path, "--family", "paper2", "--noise", "0.2", "--seed", "7", name="b")
    for f in os.listdir(a):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_generate_missing_output_dir(tmp_path, capsys):
    missing = tmp_path / "nope"
    assert main(["generate", "--out", str(missing)]) == 5
    assert not missing.exists()
    assert "does not exist" in capsys.readouterr().err


def test_generate_invalid_spec(tmp_path):
    assert main(["generate", "--out", str(tmp_path), "--noise", "3"]) == 5
    assert os.listdir(tmp_path) == []


def test_generate_from_config(tmp_path):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"family": "paper1", "planted_x": [0, 1, 1]}))
    out = _generate(tmp_path, "--config", str(cfg))
    np.testing.assert_array_equal(read_vector(out / "x_planted.csv"), [0, 1, 1])


def test_file_round_trip(tmp_path):
    out = _generate(tmp_path, "--family", "paper2")
    A = read_matrix(out / "A.csv")
    x = read_vector(out / "x_planted.csv")
    b = read_vector(out / "b.csv")
    assert np.max(np.abs(A @ x - b)) < 1e-12


def test_solve_dpbb_trace(tmp_path, capsys):
    out = _generate(tmp_path, "--family", "paper1")
    code, cap = _solve(capsys, out, "--trace")
    assert code == 0
    doc = json.loads(cap.out)
    assert doc["x"] == [1, 0, 1]
    st1 = doc["trace"]["stages"][0]
    assert st1["branches"][0]["sse"] == pytest.approx(1.8389, rel=1e-4)
    assert st1["branches"][1]["sse"] < 1e-20
    assert st1["decision"] == 1
    for st in doc["trace"]["stages"]:
        for br in st["branches"]:
            err = np.array(br["estimation_error"])
            assert br["sse"] == pytest.approx(float(err @ err), rel=1e-9, abs=1e-300)
            if br["state_estimate"] is not None:
                np.testing.assert_array_equal(
                    np.array(br["new_state"]) - np.array(br["state_estimate"]), err)


def test_trace_round_trips_exactly(tmp_path, capsys):
    from binlsq.solver import Problem, dpbb_solve
    out = _generate(tmp_path, "--family", "paper2")
    _, cap = _solve(capsys, out, "--trace")
    doc = json.loads(cap.out)["trace"]
    res = dpbb_solve(Problem(read_matrix(out / "A.csv"), read_vector(out / "b.csv")))
    for st, rec in zip(doc["stages"], res.stages):
        assert np.array(st["initial_state"]).tobytes() == rec.incoming_state.tobytes()
        assert st["branches"][1]["sse"] == rec.branch1.sse


def test_solve_tables(tmp_path, capsys):
    out = _generate(tmp_path, "--family", "paper1")
    code, cap = _solve(capsys, out, "--tables")
    assert code == 0
    assert "Decision variable is x_1. Decision is x_1 = 0." in cap.out
    assert "1.8389" in cap.out


def test_solve_oracle_and_baseline(tmp_path, capsys):
    out = _generate(tmp_path, "--family", "paper1")
    _, cap = _solve(capsys, out, "--method", "oracle")
    doc = json.loads(cap.out)
    assert doc["x"] == [1, 0, 1] and doc["candidates_evaluated"] == 8
    _, cap = _solve(capsys, out, "--method", "baseline")
    assert json.loads(cap.out)["x"] == [1, 0, 1]


def test_square_system_rejected(tmp_path, capsys):
    (tmp_path / "A.csv").write_text("1,0\n0,1\n")
    (tmp_path / "b.csv").write_text("1\n1\n")
    code, cap = _solve(capsys, tmp_path)
    assert code == 3
    assert "InvalidProblem" in cap.err


def test_dimension_mismatch(tmp_path, capsys):
    (tmp_path / "A.csv").write_text("1\n1\n1\n")
    (tmp_path / "b.csv").write_text("1\n1\n")
    assert _solve(capsys, tmp_path)[0] == 3


def test_parse_failure(tmp_path, capsys):
    (tmp_path / "A.csv").write_text("1,x\n")
    (tmp_path / "b.csv").write_text("1\n")
    assert _solve(capsys, tmp_path)[0] == 2
    assert main(["solve", str(tmp_path / "missing.csv"), str(tmp_path / "b.csv")]) == 2


def test_rank_deficiency(tmp_path, capsys):
    (tmp_path / "A.csv").write_text("1,2\n2,4\n3,6\n")
    (tmp_path / "b.csv").write_text("1\n1\n1\n")
    assert _solve(capsys, tmp_path)[0] == 4


def test_oracle_cap_exit(tmp_path, capsys):
    out = _generate(tmp_path, "--family", "paper2")
    assert _solve(capsys, out, "--method", "oracle", "--max-n", "4")[0] == 5


def test_bad_arguments_exit_spec(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 5


def test_bench(tmp_path, capsys):
    prefix = tmp_path / "rep"
    args = ["bench", "--family", "paper2", "--noise", "0,0.1,0.2", "--trials", "50",
            "--out", str(prefix)]
    assert main(args) == 0
    table = capsys.readouterr().out
    rows = [r.split(",") for r in table.splitlines()[1:]]
    dpbb0 = [r for r in rows if r[0] == "dpbb" and float(r[1]) == 0.0][0]
    assert float(dpbb0[4]) == 1.0
    first = (prefix.with_suffix(".json")).read_bytes(), (prefix.with_suffix(".csv")).read_bytes()
    assert main(args) == 0
    assert (prefix.with_suffix(".json").read_bytes(), prefix.with_suffix(".csv").read_bytes()) == first


def test_bench_oracle_over_cap_warns(tmp_path, capsys):
    code = main(["bench", "--noise", "0", "--trials", "2", "--methods", "dpbb,oracle",
                 "--max-oracle-n", "5", "--out", str(tmp_path / "r")])
    assert code == 0
    cap = capsys.readouterr()
    assert "warning: skipping oracle" in cap.err
    assert "oracle" in json.loads((tmp_path / "r.json").read_text())["skipped"]


def test_bench_invalid_spec(tmp_path):
    assert main(["bench", "--trials", "0", "--out", str(tmp_path / "r")]) == 5
    assert main(["bench", "--out", str(tmp_path / "missing" / "r")]) == 5
