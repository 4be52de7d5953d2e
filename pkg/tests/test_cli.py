"""CLI surface: one stable JSON document per invocation, exit codes 0/1/2/3."""

import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from ingleton import Kernel, build_projective_plane, uniform_pair
from ingleton.cli import main, stable_json


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ingleton.cli", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="module")
def cli_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def fano_file(cli_dir):
    path = cli_dir / "fano.json"
    res = run_cli(
        "graph", "gen", "--family", "projective-plane", "--q", "2", "-o", str(path)
    )
    assert res.returncode == 0
    return path


@pytest.fixture(scope="module")
def poly21_file(cli_dir):
    path = cli_dir / "poly21.json"
    res = run_cli(
        "graph", "gen", "--family", "poly", "--q", "2", "--k", "1", "-o", str(path)
    )
    assert res.returncode == 0
    return path


def test_gen_stdout_document():
    res = run_cli("graph", "gen", "--family", "projective-plane", "--q", "2")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["x_size"] == 7
    assert doc["y_size"] == 7
    assert len(doc["edges"]) == 21


def test_gen_output_summary(cli_dir):
    path = cli_dir / "fano2.json"
    res = run_cli(
        "graph", "gen", "--family", "projective-plane", "--q", "2", "-o", str(path)
    )
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["family"] == ["projective-plane", 2]
    assert doc["edge_count"] == 21
    assert doc["output"] == str(path)
    assert path.exists()


def test_gen_rejects_nonprime():
    res = run_cli("graph", "gen", "--family", "projective-plane", "--q", "6")
    assert res.returncode == 2
    assert "NonPrimeModulus" in res.stderr
    assert res.stdout == ""


def test_gen_poly_requires_k():
    res = run_cli("graph", "gen", "--family", "poly", "--q", "2")
    assert res.returncode == 1
    assert "usage error" in res.stderr


def test_validate_good_file(fano_file):
    res = run_cli("graph", "validate", "-i", str(fano_file))
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["valid"] is True
    assert doc["edge_count"] == 21
    assert doc["d1"] == 3
    assert doc["d2"] == 3


def test_validate_bad_file(fano_file, cli_dir):
    doc = json.loads(fano_file.read_text())
    doc["edges"] = doc["edges"][:-1]
    bad = cli_dir / "bad.json"
    bad.write_text(json.dumps(doc))
    res = run_cli("graph", "validate", "-i", str(bad))
    assert res.returncode == 2
    assert res.stdout == ""


def test_spectrum(fano_file):
    res = run_cli("spectrum", "-i", str(fano_file))
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert abs(doc["lambda1"] - 3.0) <= 1e-8
    assert abs(doc["lambda2"] - math.sqrt(2.0)) <= 1e-6
    assert doc["disconnected_suspect"] is False
    assert abs(doc["closed_form"][0] - 3.0) <= 1e-12


def test_mixing(fano_file):
    res = run_cli("mixing", "-i", str(fano_file), "--samples", "50", "--seed", "1")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["samples"] == 50
    assert doc["seed"] == 1
    assert doc["violations"] == 0
    assert doc["min_slack"] >= 0.0
    assert abs(doc["lambda1"] - 3.0) <= 1e-8


@pytest.fixture(scope="module")
def pair_file(cli_dir):
    pair = uniform_pair(build_projective_plane(2))
    path = cli_dir / "fano_pair.json"
    path.write_text(json.dumps(pair.to_json_dict()))
    return path


def test_entropy_eval(pair_file):
    res = run_cli("entropy", "eval", "-i", str(pair_file), "--expr", "I(0:1)")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert set(doc) == {"expr", "value"}
    assert doc["expr"] == "I(0:1)"
    assert abs(doc["value"] - 1.2223924213364485) <= 1e-9


def test_entropy_eval_syntax_error(pair_file):
    res = run_cli("entropy", "eval", "-i", str(pair_file), "--expr", "H(0:1)")
    assert res.returncode == 2
    assert "position 3" in res.stderr
    assert res.stdout == ""


def test_split_worked_example(cli_dir):
    doc = {
        "arity": 1,
        "alphabets": [[0, 1, 2, 3]],
        "atoms": [
            {"t": [0], "p": "2/5"},
            {"t": [1], "p": "3/10"},
            {"t": [2], "p": "1/5"},
            {"t": [3], "p": "1/10"},
        ],
    }
    path = cli_dir / "worked.json"
    path.write_text(json.dumps(doc))
    res = run_cli("split", "-i", str(path))
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["parts"] == [[0, 1], [2], [3]]
    assert out["tail"] == []
    assert out["weights"] == ["7/10", "1/5", "1/10"]
    deltas = out["achieved_delta"]
    assert abs(deltas[0] - 4.0 / 3.0) <= 1e-12
    assert deltas[1:] == [1.0, 1.0]


def test_search_exhaustive_byte_deterministic(poly21_file):
    args = ("search", "-i", str(poly21_file), "--strategy", "exhaustive")
    r1 = run_cli(*args)
    r2 = run_cli(*args)
    assert r1.returncode == 0
    assert r1.stdout == r2.stdout
    doc = json.loads(r1.stdout)
    assert abs(doc["best_ing"]) <= 1e-9
    assert doc["strategy"] == "exhaustive"
    assert doc["seed"] == 0
    assert len(doc["atoms"]) == 8
    assert len(doc["kernels"]["a"]) == 8
    assert doc["certified"]["actual_ing"] >= doc["certified"]["certified"] - 1e-9


def test_search_local_default_restarts(poly21_file):
    res = run_cli("search", "-i", str(poly21_file))
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert len(doc["trace"]) == 20
    assert doc["best_ing"] >= -1.0 - 1e-9


def test_certify_fano_copies(fano_file, cli_dir):
    pair = uniform_pair(build_projective_plane(2))
    edges = sorted(pair.atoms)
    ka = Kernel.deterministic({e: e[0] for e in edges}, 7)
    kb = Kernel.deterministic({e: e[1] for e in edges}, 7)
    kdoc = {
        "atoms": [list(e) for e in edges],
        "a": ka.to_json_rows(edges),
        "b": kb.to_json_rows(edges),
    }
    kpath = cli_dir / "copy_kernels.json"
    kpath.write_text(json.dumps(kdoc))
    res = run_cli("certify", "-i", str(fano_file), "--kernels", str(kpath))
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert abs(doc["certified"] + 2.2223924213364485) <= 1e-9
    assert abs(doc["actual_ing"]) <= 1e-9
    assert doc["branches"] == {"a": None, "b": None}
    assert doc["tail_weight"] == "0/1"
    assert doc["parts"][0]["branch_a"] == "metric_branch"


def test_certify_epsilon_flag(poly21_file, cli_dir):
    from ingleton import build_polynomial_graph

    pair = uniform_pair(build_polynomial_graph(2, 1))
    edges = sorted(pair.atoms)
    ka = Kernel.deterministic({e: e[0] for e in edges}, 4)
    kb = Kernel.deterministic({e: e[1] for e in edges}, 4)
    kdoc = {
        "atoms": [list(e) for e in edges],
        "a": ka.to_json_rows(edges),
        "b": kb.to_json_rows(edges),
    }
    kpath = cli_dir / "poly_kernels.json"
    kpath.write_text(json.dumps(kdoc))
    ok = run_cli("certify", "-i", str(poly21_file), "--kernels", str(kpath))
    assert ok.returncode == 0
    res = run_cli(
        "certify", "-i", str(poly21_file), "--kernels", str(kpath),
        "--epsilon0", "1.5",
    )
    assert res.returncode == 2
    assert "BelowEpsilonThreshold" in res.stderr


def test_verify_mixing_suite():
    res = run_cli("verify", "--suite", "mixing")
    assert res.returncode == 0
    doc = json.loads(res.stdout)
    assert doc["violations"] == 0
    assert doc["passed"] is True
    assert "elapsed_seconds" not in doc
    assert "suite mixing:" in res.stderr


def test_usage_errors():
    assert run_cli("bogus").returncode == 1
    assert run_cli("spectrum").returncode == 1
    assert run_cli("mixing", "--bogus-flag").returncode == 1
    assert run_cli("verify").returncode == 1
    res = run_cli("verify", "--suite", "nope")
    assert res.returncode == 1
    assert "usage error" in res.stderr


def test_missing_file_is_validation_error(cli_dir):
    res = run_cli("spectrum", "-i", str(cli_dir / "does_not_exist.json"))
    assert res.returncode == 2
    assert "invalid input" in res.stderr


def test_main_in_process(capsys):
    rc = main(["graph", "gen", "--family", "projective-plane", "--q", "2"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["x_size"] == 7


def test_stable_json_floats():
    assert stable_json(1.0) == "1.0"
    assert stable_json(0.5) == "0.5"
    assert stable_json(-0.0) == "-0.0"
    assert stable_json(1e22) == "1e+22"
    assert stable_json(1.2223924213364485) == "1.2223924213364485"
    assert stable_json(1.0 / 3.0) == "0.33333333333333331"
    assert stable_json(float("nan")) == "null"
    assert stable_json(float("inf")) == "null"
    assert stable_json(float("-inf")) == "null"


def test_stable_json_structures():
    doc = {"b": 1, "a": [True, False, None, (1, 2)]}
    assert stable_json(doc) == '{"a": [true, false, null, [1, 2]], "b": 1}'
    assert stable_json(Fraction(7, 10)) == '"7/10"'
    assert stable_json(Fraction(-1, 2)) == '"-1/2"'
    assert stable_json(np.int64(5)) == "5"
    assert stable_json(np.float64(2.5)) == "2.5"
    with pytest.raises(TypeError):
        stable_json({"a": {1, 2}})
