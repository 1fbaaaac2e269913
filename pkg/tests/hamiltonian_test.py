"""Tests of the Hamiltonians and their Legendre conjugates"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjconvexity.hamiltonian import (
    Hamiltonian,
    check_assumptions,
    fenchel_young_gap,
    hamiltonian_from_config,
    legendre,
    linear_hamiltonian,
    power_hamiltonian,
    quadratic_hamiltonian,
    recover_hamiltonian,
    speed_bound,
    table_hamiltonian,
)
from hjconvexity.utils import TruncationError, UnboundedSpeedError


def custom_quadratic():
    """``p^2 / 2`` without its closed-form tag."""
    return Hamiltonian(lambda p: 0.5 * p * p)


class TestAssumptions:
    def test_linear(self):
        assert check_assumptions(linear_hamiltonian()) == {
            "H1": True, "H2": True, "H3": False,
        }

    def test_quadratic(self):
        H = quadratic_hamiltonian()
        assert (H.satisfies_H1, H.satisfies_H2, H.satisfies_H3) == (True, True, True)

    def test_custom_flags_are_evaluated(self):
        H = custom_quadratic()
        assert H.satisfies_H1 and H.satisfies_H2 and H.satisfies_H3

    def test_concave(self):
        assert not Hamiltonian(np.sqrt).satisfies_H2

    def test_offset(self):
        assert not Hamiltonian(lambda p: p + 1.0).satisfies_H1

    @pytest.mark.parametrize("alpha", [1.0, 0.5])
    def test_power_alpha(self, alpha):
        with pytest.raises(ValueError, match="greater than 1"):
            power_hamiltonian(alpha)


class TestLegendre:
    def test_linear(self):
        L = legendre(linear_hamiltonian())
        assert L([0.5, 1.0, 2.0]).tolist() == [0.0, 0.0, math.inf]
        assert L.is_linear_growth

    def test_quadratic(self):
        L = legendre(quadratic_hamiltonian())
        assert L(2.0) == 2.0

    def test_power(self):
        L = legendre(power_hamiltonian(3.0))
        assert L.beta == pytest.approx(1.5)
        assert float(L(4.0)) == pytest.approx(4.0 ** 1.5 / 1.5)

    def test_numeric_matches_closed_form(self):
        L = legendre(custom_quadratic())
        assert L.tag == "numeric"
        v = np.linspace(0.0, 10.0, 41)
        np.testing.assert_allclose(L(v), 0.5 * v * v, atol=1e-3)

    def test_negative_speed(self):
        with pytest.raises(ValueError, match="v >= 0"):
            legendre(quadratic_hamiltonian())(-1.0)

    def test_requires_h1(self):
        with pytest.raises(ValueError, match="H1"):
            legendre(Hamiltonian(lambda p: p + 1.0))

    def test_truncation(self):
        # speeds past the largest slope on the p-grid have no interior maximiser
        with pytest.raises(TruncationError):
            legendre(custom_quadratic(), v_max=500.0)

    def test_linear_growth_table(self):
        H = table_hamiltonian([[0, 0], [1, 0.5], [2, 2]], growth="linear")
        L = legendre(H)
        assert L.slope_limit == pytest.approx(1.5)
        assert float(L(0.0)) == pytest.approx(0.0)
        assert float(L(2.0)) == math.inf

    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(1.05, 4.0),
        st.floats(0.0, 5.0),
        st.floats(0.0, 5.0),
    )
    def test_fenchel_young_closed_form(self, alpha, p, v):
        H = power_hamiltonian(alpha)
        L = legendre(H)
        gap = float(fenchel_young_gap(H, L, p, v))
        assert gap >= -1e-9 * (1.0 + p * v)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 10.0), st.floats(0.0, 10.0))
    def test_fenchel_young_numeric(self, p, v):
        H = custom_quadratic()
        L = NUMERIC_QUADRATIC
        assert float(fenchel_young_gap(H, L, p, v)) >= -1e-6

    def test_recover(self):
        L = legendre(quadratic_hamiltonian())
        np.testing.assert_allclose(recover_hamiltonian(L, [1.0, 2.0]), [0.5, 2.0],
                                   atol=1e-3)


NUMERIC_QUADRATIC = legendre(custom_quadratic())


class Test_speed_bound:
    def test_quadratic(self):
        L = legendre(quadratic_hamiltonian())
        assert round(speed_bound(L, 1.0), 1) == 2.0

    def test_power(self):
        L = legendre(power_hamiltonian(2.0))
        assert speed_bound(L, 1.0) == pytest.approx(2.0, abs=0.01)

    def test_linear(self):
        L = legendre(linear_hamiltonian())
        assert 1.0 < speed_bound(L, 3.0) < 1.01

    def test_numeric(self):
        margin = 10.0 * NUMERIC_QUADRATIC.cell
        speed = speed_bound(NUMERIC_QUADRATIC, 1.0)
        assert speed == pytest.approx(2.0 + margin, abs=0.01)

    def test_negative_constant(self):
        with pytest.raises(ValueError, match="nonnegative"):
            speed_bound(legendre(quadratic_hamiltonian()), -1.0)

    def test_unbounded(self):
        # L vanishes everywhere, so L(v)/v never exceeds K
        L = legendre(table_hamiltonian([[0, 0], [1, 1]]), v_max=0.5)
        with pytest.raises(UnboundedSpeedError):
            speed_bound(L, 1.0)


class Test_hamiltonian_from_config:
    def test_power(self):
        H = hamiltonian_from_config({"kind": "power", "alpha": 2.5})
        assert (H.tag, H.alpha) == ("power", 2.5)

    def test_table(self):
        H = hamiltonian_from_config({"kind": "table", "points": [[0, 0], [1, 1]]})
        assert float(H(3.0)) == 3.0

    def test_unknown(self):
        with pytest.raises(TypeError, match="Unrecognized Hamiltonian kind"):
            hamiltonian_from_config({"kind": "cubic"})

    def test_missing_points(self):
        with pytest.raises(ValueError, match="points"):
            hamiltonian_from_config({"kind": "table"})

    def test_table_must_start_at_zero(self):
        with pytest.raises(ValueError, match="p = 0"):
            table_hamiltonian([[1, 0], [2, 1]])
