import csv
import io
import json

import pytest

from tests.conftest import write_rows
from volsel.commands import main
from volsel.constants import EXIT_BUDGET, EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, EXIT_USAGE
from volsel.doctype.run_record.run_record import CSV_COLUMNS


@pytest.fixture
def staircase_file(tmp_path):
    return write_rows(tmp_path / "staircase.csv", [(1, 3), (2, 2), (3, 1)])


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_random_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["gen", "random", "--n", "100", "--d", "3", "--spread", "1e6", "--seed", "7"]
    assert main(argv + ["--output", str(first)]) == EXIT_OK
    assert main(argv + ["--output", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert len(lines) == 100
    assert all(1.0 <= float(c) <= 1e6 for line in lines for c in line.split(","))


def test_gen_random_exact_mode(capsys):
    assert main(["--mode", "exact", "gen", "random", "--n", "5", "--d", "2"]) == EXIT_OK
    for line in capsys.readouterr().out.splitlines():
        assert all(int(c) >= 1 for c in line.split(","))


def test_gen_random_needs_points():
    assert main(["gen", "random", "--n", "0", "--d", "3"]) == EXIT_USAGE


def test_gen_hardness_writes_sidecar(tmp_path):
    gamma = tmp_path / "a.txt"
    gamma.write_text("0 0\n2 0\n1 1\n")
    output = tmp_path / "instance.csv"
    assert main(["gen", "hardness", "--gamma-vertices", str(gamma), "--ell", "2", "--output", str(output)]) == EXIT_OK

    sidecar = json.loads((tmp_path / "instance.csv.json").read_text())
    m = sidecar["m"]
    assert sidecar["k"] == (m - 1) * (m - 2) // 2 + 2
    points = output.read_text().splitlines()
    assert len(points) == (m - 1) * (m - 2) // 2 + 3


def test_gen_hardness_to_stdout(tmp_path, capsys):
    gamma = tmp_path / "a.txt"
    gamma.write_text("0 0\n2 0\n1 1\n")
    assert main(["gen", "hardness", "--gamma-vertices", str(gamma), "--ell", "2"]) == EXIT_OK

    sidecar = json.loads((tmp_path / "a.hardness.json").read_text())
    m = sidecar["m"]
    assert sidecar["k"] == (m - 1) * (m - 2) // 2 + 2
    assert len(capsys.readouterr().out.splitlines()) == (m - 1) * (m - 2) // 2 + 3


def test_gen_hardness_missing_gamma_file(tmp_path):
    argv = ["gen", "hardness", "--gamma-vertices", str(tmp_path / "none.txt"), "--ell", "1"]
    assert main(argv) == EXIT_PARSE


def test_hv_engines(staircase_file, capsys):
    assert main(["hv", str(staircase_file)]) == EXIT_OK
    assert _json(capsys)["value"] == 6.0
    assert main(["hv", str(staircase_file), "--engine", "ie", "--indices", "0,2"]) == EXIT_OK
    assert _json(capsys)["value"] == 5.0
    assert main(["hv", str(staircase_file), "--engine", "estimate", "--seed", "1"]) == EXIT_OK
    assert 5.7 <= _json(capsys)["value"] <= 6.3


@pytest.mark.parametrize("indices", ["0,7", "3", "-1"])
def test_hv_rejects_out_of_range_indices(staircase_file, indices):
    assert main(["hv", str(staircase_file), "--indices", indices]) == EXIT_USAGE


def test_missing_input_file_is_parse_error(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    assert main(["solve", missing, "--algo", "greedy", "--k", "1"]) == EXIT_PARSE
    assert main(["hv", missing]) == EXIT_PARSE
    assert main(["bench", missing, "--algos", "greedy", "--k", "1"]) == EXIT_PARSE
    assert "Cannot read" in capsys.readouterr().err


def test_hv_exact_mode_estimate_is_usage_error(staircase_file):
    assert main(["hv", str(staircase_file), "--mode", "exact", "--engine", "estimate"]) == EXIT_USAGE


def test_hv_reference_point(tmp_path, capsys):
    path = write_rows(tmp_path / "front.csv", [(1, 2), (2, 1)])
    assert main(["--mode", "exact", "hv", str(path), "--reference", "3,3", "--minimize"]) == EXIT_OK
    assert _json(capsys)["value"] == 3


def test_solve_brute(staircase_file, capsys):
    assert main(["solve", str(staircase_file), "--algo", "brute", "--k", "2"]) == EXIT_OK
    record = _json(capsys)
    assert record["value"] == 5.0
    assert record["indices"] == [0, 1]
    assert record["seed"] == 0
    assert "elapsed_ms" not in record


def test_solve_timing_flag(staircase_file, capsys):
    assert main(["solve", str(staircase_file), "--algo", "greedy", "--k", "1", "--timing"]) == EXIT_OK
    assert "elapsed_ms" in _json(capsys)


def test_solve_is_byte_identical(staircase_file, capsys):
    argv = ["solve", str(staircase_file), "--algo", "eptas", "--k", "2", "--seed", "3"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first
    assert json.loads(first)["guarantee"] == "eptas(0.5)"


def test_solve_errors(tmp_path, staircase_file):
    cube = write_rows(tmp_path / "cube.csv", [(1, 2, 3)])
    assert main(["solve", str(cube), "--algo", "exact2d", "--k", "1"]) == EXIT_USAGE
    assert main(["solve", str(staircase_file), "--algo", "eptas", "--k", "1", "--eps", "0.6"]) == EXIT_USAGE
    assert main(["solve", str(staircase_file), "--algo", "brute", "--k", "4"]) == EXIT_USAGE
    assert main(["solve", str(staircase_file), "--algo", "nope", "--k", "1"]) == EXIT_USAGE


def test_solve_cell_cap(tmp_path):
    path = write_rows(tmp_path / "antichain.csv", [(1, 4), (2, 2), (4, 1)])
    argv = ["solve", str(path), "--algo", "eptas", "--k", "2", "--cell-cap", "2"]
    assert main(argv) == EXIT_BUDGET
    assert main(argv + ["--fallback", "greedy"]) == EXIT_OK


def test_solve_parse_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n1,a\n")
    assert main(["solve", str(path), "--algo", "greedy", "--k", "1"]) == EXIT_PARSE


def test_bench(staircase_file, capsys):
    assert main(["bench", str(staircase_file), "--algos", "greedy,eptas", "--k", "2"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [row["algorithm"] for row in rows] == ["greedy", "eptas"]
    assert all(row["elapsed_ms"] == "" for row in rows)


def test_bench_to_file(tmp_path, staircase_file):
    output = tmp_path / "bench.csv"
    argv = ["bench", str(staircase_file), "--algos", "brute,greedy", "--k", "1,2", "--output", str(output)]
    assert main(argv) == EXIT_OK
    assert len(output.read_text().splitlines()) == 5


def test_bench_needs_algorithms(staircase_file):
    assert main(["bench", str(staircase_file), "--algos", ",", "--k", "2"]) == EXIT_USAGE
    assert main(["bench", str(staircase_file), "--algos", "greedy,magic", "--k", "2"]) == EXIT_USAGE


def test_verify_hardness(capsys):
    assert main(["verify", "hardness", "--m", "8"]) == EXIT_OK
    report = _json(capsys)
    assert report["mu_Pm"] == 56 * (4 * 8 * 8) ** 3
    assert report["passed"]


def test_verify_hardness_bad_m():
    assert main(["verify", "hardness", "--m", "2"]) == EXIT_USAGE
    assert main(["verify", "hardness"]) == EXIT_USAGE


def test_verify_hardness_vertex_set(tmp_path, capsys):
    gamma = tmp_path / "a.txt"
    gamma.write_text("0 0\n1 0\n")
    assert main(["verify", "hardness", "--gamma-vertices", str(gamma), "--ell", "2"]) == EXIT_OK
    report = _json(capsys)
    assert report["agree"]
    assert not report["volsel_answer"]


def test_verify_lemmas(capsys):
    assert main(["verify", "lemmas", "--which", "rounding", "--trials", "5", "--seed", "3"]) == EXIT_OK
    report = _json(capsys)
    assert report["passed"] == 5
    assert report["ok"]


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "solve" in capsys.readouterr().out
    assert main([]) == EXIT_USAGE
    assert EXIT_INTERNAL == 1
