"""Tests of the convexity certificates"""

import math

import numpy as np
import pytest

from hjconvexity.convexity import (
    check_infty_subharmonious,
    check_local_to_global,
    check_one_weak_lattice,
    check_pointwise,
    check_weak_geodesic,
    convexity_slack,
    geodesic_interior,
    growth_check,
    lattice_rigidity_check,
    limit_inequality_slacks,
    lipschitz_estimate,
    midpoint_lipschitz_check,
    one_weak_midpoint,
)
from hjconvexity.hamiltonian import legendre, quadratic_hamiltonian
from hjconvexity.hopflax import ScalarField, solve_inf
from hjconvexity.spaces import EuclideanP, Lattice2, star_tree
from hjconvexity.utils import ResolutionError


def lattice_norm(h="1/2", radius=3):
    lattice = Lattice2(h=h)
    f = ScalarField.on_patch(lattice, lattice.origin, radius,
                             lambda p: float(abs(p.x1) + abs(p.x2)), lipschitz=1)
    return lattice, f


def line_field(func, h=0.25, radius=2.0):
    line = EuclideanP(dim=1, h=h)
    return line, ScalarField.on_patch(line, line.origin, radius,
                                      lambda p: func(p.coords[0]))


class TestWeakGeodesic:
    def test_lattice_norm_fails(self):
        lattice, f = lattice_norm()
        report = check_weak_geodesic(lattice, f)
        assert report.verdict == "FAIL"
        assert report.tau == 0.0
        assert report.margin <= -1.0
        first = report.named[0]
        assert (first["margin"], first["z"]) == (-1.0, lattice.point(1, 1))
        # (1,0) and (0,1) have the origin among their midpoints
        assert report.named[1]["margin"] == 2.0

    def test_squared_norm_passes(self):
        plane = EuclideanP(dim=2, h=0.25)
        f = ScalarField.on_patch(plane, plane.origin, 2,
                                 lambda p: p.coords[0] ** 2 + p.coords[1] ** 2)
        report = check_weak_geodesic(plane, f, pair_budget=500)
        assert report.passed
        assert report.pairs_tested > 0
        assert report.witness is not None

    def test_budget_counts_pairs_with_grid_midpoints(self):
        plane = EuclideanP(dim=2, h=0.25)
        f = ScalarField.on_patch(plane, plane.origin, 2,
                                 lambda p: p.coords[0] ** 2 + p.coords[1] ** 2)
        report = check_weak_geodesic(plane, f, pair_budget=1000)
        assert report.passed
        assert report.pairs_tested == 1000 + len(report.named)
        assert not any(note.startswith("only") for note in report.notes)

    def test_small_patch_tests_every_resolvable_pair(self):
        # 17 samples; pairs with an even index gap have a grid midpoint
        line, f = line_field(lambda x: x * x)
        report = check_weak_geodesic(line, f)
        assert report.pairs_tested == 36 + 28
        assert "only 64 of 2000 drawn pairs have resolvable midpoints" in report.notes

    def test_negative_abs_fails(self):
        line, f = line_field(lambda x: -abs(x))
        report = check_weak_geodesic(line, f)
        assert not report.passed
        assert report.margin == pytest.approx(-4.0)

    def test_strong(self):
        lattice, f = lattice_norm()
        report = check_weak_geodesic(lattice, f, strong=True)
        assert report.notion == "strong_geodesic"
        assert not report.passed

    def test_threads_do_not_change_results(self):
        lattice, f = lattice_norm()
        one = check_weak_geodesic(lattice, f, pair_budget=300, threads=1)
        many = check_weak_geodesic(lattice, f, pair_budget=300, threads=6)
        assert (one.margin, one.pairs_tested) == (many.margin, many.pairs_tested)
        assert one.witness == many.witness

    def test_nothing_to_test(self):
        line, f = line_field(abs, radius=0.0)
        with pytest.raises(ResolutionError):
            check_weak_geodesic(line, f)

    def test_record(self):
        lattice, f = lattice_norm()
        record = check_weak_geodesic(lattice, f, pair_budget=50).to_record()
        assert record["notion"] == "weak_geodesic"
        assert record["verdict"] == "FAIL"


class Test_convexity_slack:
    def test_value(self):
        line, f = line_field(lambda x: x * x)
        assert convexity_slack(line, f, line.point(0.0), line.point(0.5)) == 0.125

    def test_midpoint_off_grid(self):
        line, f = line_field(lambda x: x * x)
        with pytest.raises(ResolutionError):
            convexity_slack(line, f, line.point(0.0), line.point(0.25))


class Test_local_to_global:
    def test_convex(self):
        line, f = line_field(lambda x: x * x)
        report = check_local_to_global(line, f, 0.5)
        assert report.passed
        assert report.parameters["local_verdict"] == "PASS"

    def test_delta(self):
        line, f = line_field(lambda x: x * x)
        with pytest.raises(ValueError, match="delta must be positive"):
            check_local_to_global(line, f, 0.0)


class TestBalls:
    def test_squared_is_subharmonious(self):
        line, f = line_field(lambda x: x * x)
        report = check_infty_subharmonious(line, f)
        assert report.passed
        assert report.pairs_tested > 0
        assert list(report.frame.columns) == ["z", "delta_z", "slack"]

    def test_concave_is_not(self):
        line, f = line_field(lambda x: -x * x)
        report = check_infty_subharmonious(line, f, uniform=False)
        assert report.notion == "infty_subharmonious"
        assert not report.passed

    def test_bad_radii(self):
        line, f = line_field(lambda x: x * x)
        with pytest.raises(ValueError, match="not in"):
            check_infty_subharmonious(line, f, delta=0.5, r_grid=[1.0])

    def test_pointwise(self):
        line, f = line_field(lambda x: x * x)
        assert check_pointwise(line, f).passed
        line, f = line_field(lambda x: -x * x)
        assert not check_pointwise(line, f).passed

    def test_geodesic_interior_on_a_star(self):
        star = star_tree(3, 2.0, h=0.25)
        assert geodesic_interior(star, star.origin, [0.5])
        assert not geodesic_interior(star, star.vertex("leaf0"), [0.5])


class TestLattice:
    def test_one_weak_passes_on_the_norm(self):
        _, f = lattice_norm()
        report = check_one_weak_lattice(f)
        assert report.notion == "one_weak"
        assert report.passed

    def test_one_weak_needs_a_lattice(self):
        _, f = line_field(abs)
        with pytest.raises(TypeError):
            check_one_weak_lattice(f)

    def test_one_weak_midpoint(self):
        lattice = Lattice2(h="1/2")
        x, y = lattice.point(0, 0), lattice.point(2, 2)
        z = one_weak_midpoint(x, y)
        assert z == lattice.point(1, 1)
        assert lattice.distance(x, z) == lattice.distance(z, y) == 2

    def test_limit_inequalities(self):
        zero = {(1, 0): 0.0, (0, 1): 0.0, (1, 1): 0.0}
        assert set(limit_inequality_slacks(zero).values()) == {0.0}
        shifted = {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0}
        assert limit_inequality_slacks(shifted) == limit_inequality_slacks(zero)

    def test_rigidity(self):
        report = lattice_rigidity_check(trials=2000, batch=500)
        assert report.unique_solution
        assert not report.cone_is_bounded
        assert report.nonconstant == 0
        assert report.convex_fields > 0
        assert report.passed
        assert report.notes
        assert report.parameters["patch_points"] == 21

    @pytest.mark.slow
    def test_rigidity_at_full_size(self):
        report = lattice_rigidity_check()
        assert report.trials == 10**5
        assert report.nonconstant == 0
        assert report.passed


class TestEstimates:
    def test_lipschitz(self):
        line, f = line_field(abs)
        assert lipschitz_estimate(line, f) == 1.0

    def test_midpoint_lipschitz(self):
        plane = EuclideanP(dim=2, h=0.5)
        report = midpoint_lipschitz_check(plane, budget=500)
        assert report.passed
        assert report.parameters["pool"] > 1

    def test_growth(self):
        line = EuclideanP(dim=1, h=0.25)
        u0 = ScalarField.on_patch(line, line.origin, 4, lambda p: abs(p.coords[0]),
                                  lipschitz=1.0)
        L = legendre(quadratic_hamiltonian())
        u = solve_inf(line, u0, L, 1.0).field
        report = growth_check(line, u, 1.0, 1.0, quadratic_hamiltonian(), budget=500)
        assert report.passed
        assert report.parameters["C"] == 2.0
        assert math.isfinite(report.parameters["fitted_C"])
        assert np.isfinite(report.margin)
