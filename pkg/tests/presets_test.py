"""Tests of the named initial data and witnesses"""

import pytest

from hjconvexity.presets import (
    busemann_triples,
    convexity_pairs,
    literature_notes,
    preset_function,
    random_convex_preset,
)
from hjconvexity.spaces import (
    Cross,
    Cylinder,
    EuclideanP,
    GeodesicSpace,
    HalfLine,
    Lattice2,
    star_tree,
)

LATTICE = Lattice2(h="1/2")


class Test_preset_function:
    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown preset 'bump'"):
            preset_function(LATTICE, "bump")

    @pytest.mark.parametrize("name", ["height", "neg_x", "abs_x", "cross_step"])
    def test_wrong_space(self, name):
        with pytest.raises(TypeError, match=f"the {name} preset needs"):
            preset_function(LATTICE, name)

    def test_norm_on_the_lattice(self):
        func, K = preset_function(LATTICE, "norm")
        assert K == 1.0
        assert func(LATTICE.point("1/2", -2)) == 2.5

    def test_distance_scale(self):
        line = HalfLine()
        func, K = preset_function(line, "distance", center=line.point(1), scale=-2)
        assert (func(line.point(3)), K) == (-4.0, 2.0)

    def test_constant(self):
        func, K = preset_function(LATTICE, "constant", value=3)
        assert (func(LATTICE.origin), K) == (3.0, 0.0)

    def test_quadrant_product(self):
        func, K = preset_function(LATTICE, "quadrant_product")
        assert K is None
        assert func(LATTICE.point(1, 2)) == 4.0
        assert func(LATTICE.point(-1, 2)) == 0.0

    def test_cross_step(self):
        cross = Cross(arm=4.0)
        func, K = preset_function(cross, "cross_step")
        assert (func(cross.planar(2, 0)), func(cross.planar(0, 3)), K) == (
            -2.0, 0.0, 1.0,
        )

    def test_random_convex_binding(self):
        func, K = preset_function(HalfLine(), "random_convex", seed=4)
        assert K >= 0
        assert callable(func)


class Test_random_convex_preset:
    @pytest.mark.parametrize(
        "space",
        [EuclideanP(dim=2), HalfLine(), Cylinder(), star_tree(3, 2.0)],
        ids=["euclidean", "halfline", "cylinder", "tree"],
    )
    def test_reproducible(self, space):
        first, K1, desc = random_convex_preset(space, seed=7)
        second, K2, _ = random_convex_preset(space, seed=7)
        pts = space.ball_sample(space.origin, 1.0)
        assert [first(p) for p in pts] == [second(p) for p in pts]
        assert K1 == K2 > 0
        assert desc

    def test_lattice_is_constant(self):
        func, K, desc = random_convex_preset(LATTICE, seed=3)
        assert (K, desc) == (0.0, "constant")
        assert func(LATTICE.origin) == func(LATTICE.point(2, "1/2"))

    def test_unsupported(self):
        with pytest.raises(TypeError, match="no convex presets"):
            random_convex_preset(GeodesicSpace(0.5, 0.0))


class TestWitnesses:
    def test_lattice(self):
        assert len(convexity_pairs(LATTICE)) == 2
        assert [t[1] for t in busemann_triples(LATTICE)] == [
            LATTICE.point(0, 2), LATTICE.point(0, 4),
        ]
        assert literature_notes(LATTICE)

    def test_other_spaces(self):
        plane = EuclideanP(dim=2)
        assert convexity_pairs(plane) == []
        assert busemann_triples(plane) == []
        assert literature_notes(plane) == []
        (x, y, y2), = busemann_triples(Cylinder())
        assert y == y2
