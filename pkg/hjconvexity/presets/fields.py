"""Named initial data ``u0`` with their Lipschitz constants.

Every preset maps a space to ``(func, lipschitz)`` where ``func`` evaluates
a point of that space and ``lipschitz`` is the declared constant, or None
when the datum is not globally Lipschitz.
"""

import numpy as np

from hjconvexity.spaces import (
    Cross,
    Cylinder,
    EuclideanP,
    HalfLine,
    Lattice2,
    Tree,
    cross_coordinates,
)


def constant_preset(space, value=0.0):
    value = float(value)
    return (lambda p: value), 0.0


def distance_preset(space, center=None, scale=1.0):
    """``scale * d(x, center)``; the center defaults to the origin."""
    center = space.origin if center is None else center
    scale = float(scale)
    return (lambda p: scale * float(space.distance(p, center))), abs(scale)


def norm_preset(space):
    """``||x||``: the distance to the origin (the l1 norm on the lattice)."""
    return distance_preset(space)


def height_preset(space):
    if not isinstance(space, Cylinder):
        raise TypeError("the height preset needs a Cylinder")
    return (lambda p: p.height), 1.0


def neg_x_preset(space):
    if not isinstance(space, HalfLine):
        raise TypeError("the neg_x preset needs a HalfLine")
    return (lambda p: -p.x), 1.0


def abs_x_preset(space):
    if not (isinstance(space, EuclideanP) and space.dim == 1):
        raise TypeError("the abs_x preset needs a one-dimensional EuclideanP")
    return (lambda p: abs(p.coords[0])), 1.0


def quadrant_product_preset(space):
    """``(x1 + 1) x2`` on the closed first quadrant and 0 elsewhere."""
    if not isinstance(space, Lattice2):
        raise TypeError("the quadrant_product preset needs a Lattice2")

    def func(p):
        if p.x1 >= 0 and p.x2 >= 0:
            return float((p.x1 + 1) * p.x2)
        return 0.0

    return func, None


def cross_step_preset(space):
    """0 on the vertical line and ``-x1`` on the horizontal arm."""
    if not isinstance(space, Cross):
        raise TypeError("the cross_step preset needs a Cross space")

    def func(p):
        x1, _ = cross_coordinates(p)
        return -x1

    return func, 1.0


def random_convex_preset(space, seed=0):
    """Seeded geodesically convex initial data for a catalog space.

    The shapes are maxima of affine maps (line, half-line, Euclidean
    space, and affine in the height on the cylinder) plus a weighted
    distance term, or positive combinations of distance functions on
    trees. Lattice data are constant since only constants are convex
    there.

    Returns
    -------
    func: callable
    lipschitz: float
    description: string

    """
    rng = np.random.default_rng(seed)
    if isinstance(space, EuclideanP):
        q = 1.0 if space.p == np.inf else space.p / (space.p - 1.0)
        slopes = rng.uniform(-1.0, 1.0, size=(3, space.dim))
        offsets = rng.uniform(-1.0, 1.0, size=3)
        weight = float(rng.uniform(0.0, 1.0))
        center = space.point(*rng.uniform(-1.0, 1.0, size=space.dim))
        K = float(max(np.linalg.norm(a, ord=q) for a in slopes)) + weight

        def func(p):
            x = np.asarray(p.coords)
            affine = float(np.max(slopes @ x + offsets))
            return affine + weight * space.distance(p, center)

        return func, K, "max of affine maps plus a distance"
    elif isinstance(space, HalfLine):
        slopes = rng.uniform(-1.0, 1.0, size=3)
        offsets = rng.uniform(-1.0, 1.0, size=3)

        def func(p):
            return float(np.max(slopes * p.x + offsets))

        return func, float(np.max(np.abs(slopes))), "max of affine maps"
    elif isinstance(space, Cylinder):
        slopes = rng.uniform(-1.0, 1.0, size=3)
        offsets = rng.uniform(-1.0, 1.0, size=3)

        def func(p):
            return float(np.max(slopes * p.height + offsets))

        return func, float(np.max(np.abs(slopes))), "max of affine maps of the height"
    elif isinstance(space, Tree):
        pool = space.ball_sample(space.origin, space.eccentricity(space.origin))
        picks = rng.choice(len(pool), size=min(3, len(pool)), replace=False)
        centers = [pool[i] for i in sorted(picks.tolist())]
        weights = rng.uniform(0.0, 1.0, size=len(centers))
        offset = float(rng.uniform(-1.0, 1.0))

        def func(p):
            return offset + sum(
                w * space.distance(p, c) for w, c in zip(weights, centers)
            )

        return func, float(weights.sum()), "weighted sum of distance functions"
    elif isinstance(space, Lattice2):
        value = float(rng.integers(-8, 9))
        return (lambda p: value), 0.0, "constant"
    else:
        raise TypeError(f"no convex presets for {type(space).__name__}")


presets = {
    "constant": constant_preset,
    "distance": distance_preset,
    "norm": norm_preset,
    "height": height_preset,
    "neg_x": neg_x_preset,
    "abs_x": abs_x_preset,
    "quadrant_product": quadrant_product_preset,
    "cross_step": cross_step_preset,
}


def preset_function(space, name, **kwargs):
    """Look up a named preset and bind it to ``space``.

    Returns
    -------
    func: callable
    lipschitz: float or None

    Raises
    ------
    ValueError
        If ``name`` is not a known preset.

    """
    if name == "random_convex":
        func, lipschitz, _ = random_convex_preset(space, **kwargs)
        return func, lipschitz
    if name not in presets:
        raise ValueError(
            f"unknown preset {name!r}; known: {', '.join(sorted(presets))}, "
            "random_convex"
        )
    return presets[name](space, **kwargs)
