"""Tests of the command line interface"""

import json
import os
from textwrap import dedent

import pytest

from hjconvexity.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main

DATA = os.path.join(os.path.dirname(__file__), "data")

LATTICE_NORM = """
    [space]
    kind = "lattice"
    h = "1/2"
    radius = 3

    [initial]
    preset = "norm"

    [checks]
    notion = "weak-geodesic"
    pair_budget = 500
"""


def write(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(dedent(text))
    return str(path)


def test_solve_writes_every_time(tmp_path):
    config = write(tmp_path, """
        [space]
        kind = "euclidean"
        h = 0.5
        radius = 3

        [hamiltonian]
        kind = "quadratic"

        [initial]
        preset = "constant"
        value = 2.0

        [times]
        values = [0, 0.5, 1]
    """)
    out = tmp_path / "out"
    assert main(["solve", "--config", config, "--out", str(out)]) == EXIT_OK
    assert sorted(os.listdir(out)) == [
        "u_t0.5.csv", "u_t0.5.json", "u_t0.csv", "u_t1.csv", "u_t1.json",
    ]
    record = json.loads((out / "u_t1.json").read_text())
    assert record["method"] == "inf"


def test_solve_from_a_field_file(tmp_path):
    out = tmp_path / "out"
    config = os.path.join(DATA, "halfline_csv.toml")
    code = main(["solve", "--config", config, "--out", str(out), "--format", "csv"])
    assert code == EXIT_OK
    assert sorted(os.listdir(out)) == ["u_t0.25.csv", "u_t0.5.csv"]


def test_solve_needs_a_hamiltonian(tmp_path):
    config = write(tmp_path, """
        [space]
        kind = "halfline"

        [hamiltonian]
        alpha = 2.0
    """)
    assert main(["solve", "--config", config, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_check_weak_fails_on_the_lattice_norm(tmp_path, capsys):
    config = write(tmp_path, LATTICE_NORM)
    out = tmp_path / "out"
    code = main(["check", "--config", config, "--notion", "weak-geodesic",
                 "--out", str(out)])
    assert code == EXIT_FAIL
    printed = capsys.readouterr().out
    assert "FAIL" in printed
    assert "x=(1/2, 1) y=(1, 1/2) z=(1, 1)" in printed
    record = json.loads((out / "check_weak-geodesic.json").read_text())
    assert record["verdict"] == "FAIL"


def test_check_one_weak_passes(tmp_path):
    config = write(tmp_path, LATTICE_NORM)
    code = main(["check", "--config", config, "--notion", "one-weak",
                 "--out", str(tmp_path / "out")])
    assert code == EXIT_OK


def test_check_busemann_on_the_plane(tmp_path):
    config = write(tmp_path, """
        [space]
        kind = "euclidean"
        dim = 2
        h = 0.5

        [checks]
        notion = "busemann3"
        sample_budget = 200
    """)
    assert main(["check", "--config", config, "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "check_busemann3.json").exists()


def test_check_after_solving(tmp_path):
    config = write(tmp_path, """
        [space]
        kind = "euclidean"
        h = 0.25
        radius = 4

        [hamiltonian]
        kind = "quadratic"

        [initial]
        preset = "abs_x"

        [checks]
        notion = "weak-geodesic"
        time = 1.0
        tau = 1e-6
    """)
    assert main(["check", "--config", config, "--out", str(tmp_path)]) == EXIT_OK


def test_check_without_notion(tmp_path):
    config = write(tmp_path, '[space]\nkind = "halfline"\n')
    assert main(["check", "--config", config, "--out", str(tmp_path)]) == EXIT_CONFIG


def test_check_preset_mismatch(tmp_path):
    config = write(tmp_path, """
        [space]
        kind = "halfline"

        [initial]
        preset = "height"
    """)
    code = main(["check", "--config", config, "--notion", "pointwise",
                 "--out", str(tmp_path)])
    assert code == EXIT_CONFIG


def test_experiment_list(capsys):
    assert main(["experiment", "--list"]) == EXIT_OK
    assert "lattice-rigidity" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [["experiment"], ["experiment", "sphere"]])
def test_experiment_errors(argv):
    assert main(argv) == EXIT_CONFIG


def test_experiment_writes_reports(tmp_path, capsys):
    code = main(["experiment", "lattice-nonpreservation", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert "PASS" in capsys.readouterr().out
    files = os.listdir(tmp_path)
    assert "lattice-nonpreservation.json" in files
    assert "lattice-nonpreservation_goldens.csv" in files
