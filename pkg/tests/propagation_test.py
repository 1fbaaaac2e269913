"""Convex initial data stay weakly convex under the Hopf-Lax semigroup"""

import pytest

from hjconvexity.convexity import check_weak_geodesic
from hjconvexity.hamiltonian import quadratic_hamiltonian
from hjconvexity.hopflax import ScalarField, lagrangian_for, solve_inf
from hjconvexity.presets import random_convex_preset
from hjconvexity.spaces import Cylinder, EuclideanP, star_tree

L = lagrangian_for(quadratic_hamiltonian())
TIMES = [0.25, 0.5, 1.0]

# space, patch radius, number of seeds
CASES = {
    "line": (EuclideanP(dim=1, h=0.125), 6.0, 20),
    "plane": (EuclideanP(dim=2, p=2.0, h=0.25), 6.0, 5),
    "star": (star_tree(3, 2.0, h=0.125), 2.0, 20),
    "cylinder": (Cylinder(h=0.25), 4.0, 5),
}


def cases():
    for name, (space, radius, seeds) in CASES.items():
        for seed in range(seeds):
            for t in TIMES:
                yield pytest.param(space, radius, seed, t, id=f"{name}-{seed}-{t:g}")


@pytest.mark.slow
@pytest.mark.filterwarnings("ignore::UserWarning")
@pytest.mark.parametrize("space, radius, seed, t", list(cases()))
def test_convexity_is_preserved(space, radius, seed, t):
    func, K, _ = random_convex_preset(space, seed=seed)
    u0 = ScalarField.on_patch(space, space.origin, radius, func, lipschitz=K)
    report = solve_inf(space, u0, L, t)
    assert report.complete.any()
    h = float(space.h)
    tau = 5.0 * K * h + h * h / t
    check = check_weak_geodesic(space, report.field, pair_budget=400, tau=tau,
                                seed=seed)
    assert check.passed, check.witness


def test_star_patch_is_complete():
    space, radius, _ = CASES["star"]
    func, K, _ = random_convex_preset(space, seed=0)
    u0 = ScalarField.on_patch(space, space.origin, radius, func, lipschitz=K)
    assert solve_inf(space, u0, L, 1.0).complete.all()
