"""Tests of the Busemann checks"""

import json
import math
from fractions import Fraction

import pytest

from hjconvexity.spaces import Cylinder, EuclideanP, Lattice2
from hjconvexity.structure import (
    check_busemann3,
    check_busemann4,
    check_equivalence_3_4,
    check_uniform_npc,
    search_npc_delta,
)

LATTICE = Lattice2(h="1/2")


class Test_busemann3:
    def test_lattice_fails_at_the_named_triples(self):
        report = check_busemann3(LATTICE, 50)
        assert report.verdict == "FAIL"
        assert [t["margin"] for t in report.named] == [Fraction(-2), Fraction(-4)]
        assert report.margin <= -4
        assert report.tau == 0
        assert report.notes

    def test_named_midpoints(self):
        first = check_busemann3(LATTICE, 0).named[0]
        assert (first["z"], first["z2"]) == (LATTICE.point(0, 1),
                                             LATTICE.point(1, "1/2"))

    def test_euclidean_passes(self):
        plane = EuclideanP(dim=2, p=2.0, h=0.25)
        report = check_busemann3(plane, 500)
        assert report.passed
        assert report.unique_midpoints
        assert report.named == []

    def test_cylinder_fails_at_the_antipode(self):
        report = check_busemann3(Cylinder(h=0.25), 100)
        assert not report.passed
        assert not report.unique_midpoints
        assert report.named[0]["margin"] == pytest.approx(-2 * math.pi)

    def test_threads_do_not_change_results(self):
        one = check_busemann3(LATTICE, 200, threads=1)
        many = check_busemann3(LATTICE, 200, threads=4)
        assert (one.margin, one.witness) == (many.margin, many.witness)

    def test_json(self):
        record = json.loads(check_busemann3(LATTICE, 10).to_json())
        assert record["condition"] == "busemann3"
        assert record["named"][-1]["margin"] == "-4/2^0"


class Test_busemann4:
    def test_lattice(self):
        assert not check_busemann4(LATTICE, 50).passed

    def test_euclidean(self):
        plane = EuclideanP(dim=2, p=2.0, h=0.25)
        report = check_busemann4(plane, 300)
        assert report.passed
        assert report.tuples_tested == 600


@pytest.mark.parametrize(
    "space", [LATTICE, EuclideanP(dim=2, h=0.5)], ids=["lattice", "euclidean"]
)
def test_equivalence(space):
    report = check_equivalence_3_4(space, 100)
    assert report.passed
    assert report.witness is None
    assert report.three.verdict == report.four.verdict


class Test_uniform_npc:
    def test_small_balls_pass(self):
        report = check_uniform_npc(Lattice2(h="1/8"), 1 / 3, 200)
        assert report.passed
        assert report.delta == pytest.approx(1 / 3)
        assert report.named == []

    def test_large_balls_hold_the_witness(self):
        report = check_uniform_npc(Lattice2(h="1/8"), 3.0, 100)
        assert not report.passed
        assert report.named[0]["margin"] == Fraction(-2)

    @pytest.mark.parametrize("delta", [0.0, -1.0])
    def test_delta(self, delta):
        with pytest.raises(ValueError, match="delta must be positive"):
            check_uniform_npc(LATTICE, delta)


class Test_search_npc_delta:
    def test_bounds(self):
        with pytest.raises(ValueError, match="0 < lo < hi"):
            search_npc_delta(LATTICE, 1.0, 1.0)

    def test_bisection(self):
        lattice = Lattice2(h="1/8")
        delta, report = search_npc_delta(lattice, 1 / 3, 3.0, sample_budget=100,
                                         iterations=3)
        assert 1 / 3 <= delta < 3.0
        assert report.passed

    def test_failing_lower_bound_keeps_its_witness(self):
        delta, report = search_npc_delta(Lattice2(h="1/8"), 3.0, 4.0,
                                         sample_budget=100)
        assert delta is None
        assert not report.passed
        assert report.delta == pytest.approx(3.0)
        assert report.named[0]["margin"] == Fraction(-2)

    def test_euclidean_passes_at_the_top(self):
        plane = EuclideanP(dim=2, h=0.5)
        delta, report = search_npc_delta(plane, 0.5, 1.0, sample_budget=50)
        assert delta == 1.0
        assert report.passed
