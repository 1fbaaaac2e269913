"""Tests of the golden experiment registry"""

import json
import math

import pytest

from hjconvexity.experiments import (
    ExperimentReport,
    ExperimentSpec,
    Golden,
    list_experiments,
    register,
    registry,
    run_experiment,
)
from hjconvexity.utils import UnknownExperimentError


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(registry))
def test_experiment_matches_its_goldens(name):
    report = run_experiment(name)
    mismatches = report.diff_table(mismatches_only=True)
    assert report.passed, mismatches.to_string()
    assert report.goldens


def test_registry():
    assert len(registry) == 9
    df = list_experiments()
    assert list(df.columns) == ["name", "description"]
    assert set(df["name"]) == set(registry)


def test_duplicate_registration():
    spec = registry["lattice-rigidity"]
    with pytest.raises(ValueError, match="already registered"):
        register(spec)


def test_unknown_experiment():
    with pytest.raises(UnknownExperimentError):
        run_experiment("sphere-preservation")


def test_spec_config():
    spec = registry["cylinder-preservation"]
    config = spec.config()
    assert config["times"] == {"values": [0.5, 1.0, 2.0], "sense": "inf",
                               "method": "eikonal"}
    assert "checks" not in config
    assert ExperimentSpec("bare", "nothing", runner=None).config() == {}


class TestGolden:
    @pytest.mark.parametrize(
        "value, expected, relation, tolerance, matches",
        [
            (1.0, 1.05, "eq", 0.1, True),
            (1.0, 1.2, "eq", 0.1, False),
            (0.5, 0.5, "le", 0.0, True),
            (0.5, 0.5, "lt", 0.0, False),
            (-1.0, -0.5, "ge", 0.25, False),
            ("PASS", "PASS", "is", 0.0, True),
            (None, 1.0, "le", 0.0, False),
            (math.inf, 1.0, "ge", 0.0, True),
        ],
    )
    def test_relations(self, value, expected, relation, tolerance, matches):
        g = Golden("g", value, expected, tolerance=tolerance, relation=relation)
        assert g.matches is matches

    def test_bad_relation(self):
        with pytest.raises(ValueError, match="unknown relation"):
            Golden("g", 1, 1, relation="ne")

    def test_bad_provenance(self):
        with pytest.raises(ValueError, match="unknown provenance"):
            Golden("g", 1, 1, provenance="folklore")


class TestExperimentReport:
    def make(self):
        report = ExperimentReport("toy", seed=3)
        report.golden("one", 1.0, 1.0)
        report.golden("two", 2.0, 1.0, relation="le")
        return report

    def test_passed(self):
        report = self.make()
        assert not report.passed
        assert report.diff_table(mismatches_only=True)["name"].tolist() == ["two"]

    def test_write(self, tmp_path):
        report = self.make()
        paths = report.write(str(tmp_path))
        assert [p.rsplit("/", 1)[-1] for p in paths] == ["toy.json", "toy_goldens.csv"]
        record = json.loads((tmp_path / "toy.json").read_text())
        assert record["verdict"] == "FAIL"
        assert [g["match"] for g in record["goldens"]] == [True, False]

    def test_write_format(self, tmp_path):
        with pytest.raises(ValueError, match="format must be"):
            self.make().write(str(tmp_path), fmt="xml")
