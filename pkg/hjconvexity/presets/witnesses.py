"""Named witnesses that every sampled check includes deterministically."""

import math

from hjconvexity.spaces import Cylinder, Lattice2


def convexity_pairs(space):
    """Pairs ``(x, y)`` at which convexity of the lattice norm breaks."""
    if isinstance(space, Lattice2):
        return [
            (space.point("1/2", 1), space.point(1, "1/2")),
            (space.point(1, 0), space.point(0, 1)),
        ]
    return []


def busemann_triples(space):
    """Triples ``(x, y, y')`` violating ``2 d(z, z') <= d(y, y')``.

    On the lattice ``x = (0, 0)``, ``y = (0, 2k)``, ``y' = (k, 2k)`` for
    ``k = 1, 2``; the midpoints ``(0, k)`` and ``(k, k/2)`` are ``3k/2``
    apart. On the cylinder ``y = y'`` is antipodal to ``x``.
    """
    if isinstance(space, Lattice2):
        triples = []
        for k in (1, 2):
            try:
                triples.append(
                    (space.point(0, 0), space.point(0, 2 * k), space.point(k, 2 * k))
                )
            except ValueError:
                continue
        return triples
    if isinstance(space, Cylinder):
        antipode = space.point(math.pi, 0.0)
        return [(space.point(0.0, 0.0), antipode, antipode)]
    return []


def literature_notes(space):
    """Known misprints in published witnesses for ``space``."""
    if isinstance(space, Lattice2):
        return [
            "the published lattice witness quotes the midpoint of (0,0) and "
            "(0,2k) as (0,1); the computed midpoint is (0,k) and the margin "
            "2k is obtained with it"
        ]
    return []
