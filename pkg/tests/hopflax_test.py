"""Tests of the Hopf-Lax and eikonal solvers"""

import numpy as np
import pytest

from hjconvexity.hamiltonian import (
    legendre,
    linear_hamiltonian,
    quadratic_hamiltonian,
)
from hjconvexity.hopflax import (
    ScalarField,
    alpha_gap,
    dpp_check,
    lagrangian_for,
    radius_doubling_check,
    residual_check,
    solve,
    solve_eikonal,
    solve_inf,
    solve_sup,
)
from hjconvexity.spaces import EuclideanP, HalfLine, Lattice2
from hjconvexity.utils import ResolutionError, SolveError

QUADRATIC_L = legendre(quadratic_hamiltonian())


def abs_field(h=0.25, radius=4.0):
    line = EuclideanP(dim=1, h=h)
    u0 = ScalarField.on_patch(line, line.origin, radius,
                              lambda p: abs(p.coords[0]), lipschitz=1.0)
    return line, u0


def quadratic_abs_solution(x, t):
    """Hopf-Lax infimum of ``|x|`` with ``L(v) = v^2 / 2``."""
    x = np.abs(x)
    return np.where(x <= t, x * x / (2.0 * t), x - t / 2.0)


class TestScalarField:
    def test_on_patch(self):
        line = HalfLine(h=0.5)
        u0 = ScalarField.on_patch(line, line.point(3), 1, lambda p: -p.x,
                                  lipschitz=1)
        assert u0.values.tolist() == [-2.0, -2.5, -3.0, -3.5, -4.0]
        assert u0.patch == (line.point(3), 1)
        assert u0.valid.all()

    def test_canonical_order(self):
        line = HalfLine(h=0.5)
        pts = [line.point(1), line.point(0), line.point(0.5)]
        f = ScalarField(line, pts, [1.0, 0.0, 0.5])
        assert [p.x for p in f.points] == [0.0, 0.5, 1.0]
        assert f.values.tolist() == [0.0, 0.5, 1.0]

    def test_length_mismatch(self):
        line = HalfLine()
        with pytest.raises(ValueError, match="2 points but 1 values"):
            ScalarField(line, [line.point(0), line.point(1)], [0.0])

    def test_values_are_read_only(self):
        _, u0 = abs_field()
        with pytest.raises(ValueError):
            u0.values[0] = 1.0

    def test_value_at(self):
        _, u0 = abs_field()
        line = u0.space
        assert u0.value_at(line.point(-1.5)) == 1.5
        with pytest.raises(ResolutionError):
            u0.value_at(line.point(0.1))

    def test_interior(self):
        line, u0 = abs_field(h=0.5, radius=2.0)
        inside = u0.interior(1.0)
        x = u0.coords.reshape(-1)
        assert inside.tolist() == (np.abs(x) <= 1.0).tolist()

    def test_csv_keeps_lattice_coordinates(self, tmp_path):
        lattice = Lattice2(h="1/4")
        f = ScalarField.on_patch(lattice, lattice.origin, 1,
                                 lambda p: float(p.x1 - p.x2))
        path = tmp_path / "u.csv"
        f.to_csv(path)
        back = ScalarField.from_csv(lattice, path)
        assert back.points == f.points
        assert back.values.tolist() == f.values.tolist()
        assert back.valid.all()

    def test_csv_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,u\n0,1\n")
        with pytest.raises(ValueError, match="missing column"):
            ScalarField.from_csv(HalfLine(), path)


class TestSolvers:
    def test_constant_is_stationary(self):
        line = EuclideanP(dim=1, h=0.5)
        u0 = ScalarField.on_patch(line, line.origin, 4, lambda p: 2.0, lipschitz=0)
        assert set(solve_inf(line, u0, QUADRATIC_L, 1.0).values) == {2.0}

    def test_quadratic_on_abs(self):
        line, u0 = abs_field()
        report = solve_inf(line, u0, QUADRATIC_L, 1.0)
        x = u0.coords.reshape(-1)
        valid = report.complete
        assert valid.sum() > 0
        assert not valid.all()
        np.testing.assert_allclose(report.values[valid],
                                   quadratic_abs_solution(x[valid], 1.0), atol=1e-9)

    def test_witness_is_minimiser(self):
        line, u0 = abs_field()
        report = solve_inf(line, u0, QUADRATIC_L, 1.0)
        assert report.witness(line.point(1.5)) == line.point(0.5)
        assert report.witness(line.point(0.5)) == line.origin

    def test_eikonal_sup_on_halfline(self):
        line = HalfLine(h=0.25)
        u0 = ScalarField.on_patch(line, line.point(6), 6, lambda p: -p.x,
                                  lipschitz=1)
        report = solve_eikonal(line, u0, 1.0, sign="sup")
        x = u0.coords.reshape(-1)
        valid = report.complete
        assert valid.tolist() == (x <= 11.0).tolist()
        expected = np.minimum(1.0 - x, 0.0)
        assert report.values[valid].tolist() == expected[valid].tolist()

    def test_sup_mirrors_inf(self):
        line, u0 = abs_field()
        negated = u0.with_values(-u0.values)
        inf = solve_inf(line, u0, QUADRATIC_L, 0.5)
        sup = solve_sup(line, negated, QUADRATIC_L, 0.5)
        assert np.array_equal(sup.values, -inf.values)

    def test_threads_do_not_change_results(self):
        line, u0 = abs_field(h=0.125, radius=6.0)
        one = solve_inf(line, u0, QUADRATIC_L, 1.0, threads=1)
        many = solve_inf(line, u0, QUADRATIC_L, 1.0, threads=8)
        assert np.array_equal(one.values, many.values)
        assert np.array_equal(one.witnesses, many.witnesses)
        assert np.array_equal(one.complete, many.complete)

    def test_needs_lipschitz(self):
        line = EuclideanP(dim=1, h=0.5)
        u0 = ScalarField.on_patch(line, line.origin, 2, lambda p: 0.0)
        with pytest.raises(SolveError, match="Lipschitz"):
            solve_inf(line, u0, QUADRATIC_L, 1.0)

    def test_positive_time(self):
        line, u0 = abs_field()
        with pytest.raises(ValueError, match="t must be positive"):
            solve_inf(line, u0, QUADRATIC_L, 0.0)

    def test_bad_sign(self):
        line, u0 = abs_field()
        with pytest.raises(ValueError, match="sign"):
            solve_eikonal(line, u0, 1.0, sign="max")

    def test_report_frame(self):
        line, u0 = abs_field(h=0.5, radius=2.0)
        df = solve_eikonal(line, u0, 0.5).to_frame()
        assert list(df.columns) == ["x1", "value", "witness", "candidates",
                                    "complete"]
        assert len(df) == len(u0)


class Test_solve:
    def test_linear_selects_eikonal(self):
        line, u0 = abs_field()
        report = solve(line, u0, linear_hamiltonian(), 1.0)
        assert report.method == "eikonal"
        eikonal = solve_eikonal(line, u0, 1.0)
        assert np.array_equal(report.values, eikonal.values)

    def test_hopflax(self):
        line, u0 = abs_field()
        report = solve(line, u0, quadratic_hamiltonian(), 1.0)
        assert report.method == "inf"
        direct = solve_inf(line, u0, QUADRATIC_L, 1.0)
        assert np.array_equal(report.values, direct.values)

    def test_needs_hamiltonian(self):
        line, u0 = abs_field()
        with pytest.raises(SolveError):
            solve(line, u0, None, 1.0)

    @pytest.mark.parametrize(
        "kwargs, match",
        [({"sense": "max"}, "sense"), ({"method": "upwind"}, "method")],
    )
    def test_bad_options(self, kwargs, match):
        line, u0 = abs_field()
        with pytest.raises(ValueError, match=match):
            solve(line, u0, quadratic_hamiltonian(), 1.0, **kwargs)

    def test_lagrangian_for(self):
        assert lagrangian_for(linear_hamiltonian()) is None
        assert lagrangian_for(quadratic_hamiltonian()).tag == "quadratic"


class TestConsistency:
    def test_dpp(self):
        line, u0 = abs_field()
        report = dpp_check(line, u0, QUADRATIC_L, 0.5, 1.0)
        assert report.passed
        assert report.checked > 0

    def test_dpp_is_exact_on_the_lattice(self):
        lattice = Lattice2(h="1/4")
        u0 = ScalarField.on_patch(lattice, lattice.origin, 4,
                                  lambda p: float(abs(p.x1) + abs(p.x2)),
                                  lipschitz=1)
        report = dpp_check(lattice, u0, None, 1.0, 2.0, sense="sup")
        assert report.tolerance == 0.0
        assert report.discrepancy == 0.0

    def test_dpp_times(self):
        line, u0 = abs_field()
        with pytest.raises(ValueError, match="0 < s < t"):
            dpp_check(line, u0, QUADRATIC_L, 1.0, 1.0)

    def test_radius_doubling(self):
        line, u0 = abs_field(radius=8.0)
        report = radius_doubling_check(line, u0, QUADRATIC_L, 1.0)
        assert report.passed
        assert report.checked > 0

    def test_residual_on_abs(self):
        line, u0 = abs_field(h=0.05)
        u = solve_inf(line, u0, QUADRATIC_L, 1.0).field
        u_next = solve_inf(line, u0, QUADRATIC_L, 1.1).field
        report = residual_check(line, u, u_next, quadratic_hamiltonian(), 0.1)
        assert report.passed
        assert report.discrepancy < 0.2
        assert report.checked > 0
        assert list(report.frame.columns) == ["x", "residual", "kink"]

    def test_residual_needs_a_line(self):
        lattice = Lattice2(h="1/2")
        f = ScalarField.on_patch(lattice, lattice.origin, 1, lambda p: 0.0)
        with pytest.raises(TypeError, match="one-dimensional"):
            residual_check(lattice, f, f, quadratic_hamiltonian(), 0.1)

    def test_alpha_gap(self):
        line = HalfLine(h=0.05)
        u0 = ScalarField.on_patch(line, line.point(3), 3, lambda p: -p.x,
                                  lipschitz=1)
        df, md = alpha_gap(line, u0, (2.0, 1.5, 1.2), 1.0)
        assert md.within_bounds
        assert md.monotone
        assert df["gap"].tolist() == pytest.approx([0.5, 1 / 3, 1 / 6], abs=1e-9)

    def test_alpha_gap_needs_lipschitz(self):
        line = HalfLine(h=0.5)
        u0 = ScalarField.on_patch(line, line.point(2), 2, lambda p: -p.x)
        with pytest.raises(SolveError):
            alpha_gap(line, u0, (2.0,), 1.0)
