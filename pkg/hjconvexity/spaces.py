"""
Geodesic metric spaces with exact midpoint enumeration.

Every space exposes the same surface: distances (scalar and vectorised),
geodesic interpolation with an explicit branch index, midpoint sets,
ball sampling at the space's resolution ``h`` and the separation point
construction. Spaces and points are immutable, so every operation is safe
to call from several threads.

The catalog contains

- :class:`EuclideanP`, ``R^dim`` with a p-norm,
- :class:`HalfLine`, ``[0, inf)``,
- :class:`Cylinder`, the flat cylinder ``S^1 x R`` with its intrinsic metric,
- :class:`Lattice2`, the square lattice graph with exact dyadic coordinates,
- :class:`Tree`, finite metric trees, and
- :class:`Cross`, the set ``{0} x R  U  R_+ x {0}`` as a three arm star.

"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from hjconvexity.utils import (
    DomainError,
    EnumerationError,
    format_dyadic,
    is_dyadic,
    parse_dyadic,
)

TWO_PI = 2.0 * math.pi

# decimals used to build hashable keys for float coordinates
_KEY_DECIMALS = 9


# ---------------------------------------------------------------- points


@dataclass(frozen=True)
class EuclideanPoint:
    coords: Tuple[float, ...]

    kind = "euclidean"

    def label(self):
        return "(" + ", ".join(f"{c:g}" for c in self.coords) + ")"

    def to_record(self):
        return {"kind": self.kind, "coords": [float(c) for c in self.coords]}


@dataclass(frozen=True)
class HalfLinePoint:
    x: float

    kind = "halfline"

    def label(self):
        return f"{self.x:g}"

    def to_record(self):
        return {"kind": self.kind, "x": float(self.x)}


@dataclass(frozen=True)
class CylinderPoint:
    theta: float
    height: float

    kind = "cylinder"

    def label(self):
        return f"({self.theta:g}, {self.height:g})"

    def to_record(self):
        return {
            "kind": self.kind,
            "theta": float(self.theta),
            "height": float(self.height),
        }


def _fmt_fraction(value):
    return format_dyadic(value) if is_dyadic(value) else str(value)


@dataclass(frozen=True)
class LatticePoint:
    x1: Fraction
    x2: Fraction

    kind = "lattice"

    def label(self):
        return f"({self.x1}, {self.x2})"

    def to_record(self):
        return {
            "kind": self.kind,
            "x1": _fmt_fraction(self.x1),
            "x2": _fmt_fraction(self.x2),
        }


@dataclass(frozen=True)
class TreePoint:
    edge: int
    offset: float

    kind = "tree"

    def label(self):
        return f"e{self.edge}@{self.offset:g}"

    def to_record(self):
        return {"kind": self.kind, "edge": int(self.edge), "offset": float(self.offset)}


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class SpaceConfig:
    """Declarative description of a space.

    Parameters
    ----------
    kind: string
        One of ``"euclidean"``, ``"halfline"``, ``"cylinder"``,
        ``"lattice"``, ``"tree"`` or ``"cross"``.
    params: tuple of (key, value) pairs
        Kind-specific parameters (``dim`` and ``p``; ``edges``; ``arm``;
        ``box``).
    h: float or Fraction
        Sampling resolution.
    eps_mid: float, optional
        Midpoint tolerance, defaults per kind when omitted.

    """

    kind: str
    params: Tuple[Tuple[str, object], ...] = ()
    h: object = 0.1
    eps_mid: Optional[float] = None

    def build(self):
        return space_from_config(
            {"kind": self.kind, "h": self.h, "eps_mid": self.eps_mid,
             **dict(self.params)}
        )


# ---------------------------------------------------------------- base


class GeodesicSpace:
    """Base class of the catalog.

    Subclasses implement the point bookkeeping (``point``, ``check``,
    ``key``, ``sort_key``, ``from_record``), the metric (``distance``,
    ``coordinates``, ``distances_from``), the geodesic enumeration
    (``geodesic_points``) and ``ball_sample``. Separation points, midpoint
    sets and branch selection are derived here.
    """

    kind = None
    coordinate_names = ()

    def __init__(self, h, eps_mid):
        if h is None or h <= 0:
            raise ValueError(f"sampling resolution h must be positive, got {h}")
        if eps_mid < 0:
            raise ValueError(f"eps_mid must be nonnegative, got {eps_mid}")
        self.h = h
        self.eps_mid = eps_mid

    def __repr__(self) -> str:
        return f"{type(self).__name__}(h={self.h}, eps_mid={self.eps_mid})"

    # point bookkeeping
    def point(self, *args):
        raise NotImplementedError("point must be implemented by GeodesicSpace children")

    def check(self, x):
        raise NotImplementedError("check must be implemented by GeodesicSpace children")

    def key(self, x):
        raise NotImplementedError("key must be implemented by GeodesicSpace children")

    def sort_key(self, x):
        return self.key(x)

    def from_record(self, record):
        raise NotImplementedError(
            "from_record must be implemented by GeodesicSpace children"
        )

    def coordinate_values(self, x):
        """Column values used when a field is written to CSV."""
        record = x.to_record()
        return [record[name] for name in self.coordinate_names]

    def from_coordinate_values(self, values):
        record = dict(zip(self.coordinate_names, values))
        record["kind"] = self.kind
        return self.from_record(record)

    @property
    def origin(self):
        raise NotImplementedError(
            "origin must be implemented by GeodesicSpace children"
        )

    # metric
    def distance(self, x, y):
        raise NotImplementedError(
            "distance must be implemented by GeodesicSpace children"
        )

    def coordinates(self, points):
        """Array form of ``points`` accepted by :meth:`distances_from`."""
        raise NotImplementedError(
            "coordinates must be implemented by GeodesicSpace children"
        )

    def distances_from(self, x, coords):
        """Distances from ``x`` to every row of ``coords`` as a float array."""
        raise NotImplementedError(
            "distances_from must be implemented by GeodesicSpace children"
        )

    def eccentricity(self, center):
        """Largest distance from ``center`` to a point of the space."""
        return math.inf

    def ball_within(self, center, radius, x, r):
        """True if ``B_r(x)`` is contained in the patch ``B_radius(center)``."""
        if radius >= self.eccentricity(center) - self.eps_mid:
            return True
        return float(self.distance(center, x)) + float(r) <= float(radius) + 1e-12

    # geodesics
    def geodesic_points(self, x, y, s):
        """All points at parameter ``s`` on some geodesic, canonical order."""
        raise NotImplementedError(
            "geodesic_points must be implemented by GeodesicSpace children"
        )

    def geodesic_point(self, x, y, s, branch=0):
        if not 0 <= s <= 1:
            raise ValueError(f"geodesic parameter s must lie in [0, 1], got {s}")
        self.check(x)
        self.check(y)
        candidates = self.geodesic_points(x, y, s)
        if branch < 0 or branch >= len(candidates):
            raise EnumerationError(branch, len(candidates))
        return candidates[branch]

    def geodesic_count(self, x, y, s=0.5):
        return len(self.geodesic_points(x, y, s))

    def midpoints(self, x, y):
        self.check(x)
        self.check(y)
        if self.key(x) == self.key(y):
            return [x]
        return self._dedupe(self.geodesic_points(x, y, 0.5))

    def ball_sample(self, center, r):
        raise NotImplementedError(
            "ball_sample must be implemented by GeodesicSpace children"
        )

    def separate(self, x, y, z):
        """Separation point: a point ``w`` with
        ``d(x, w) <= d(y, z)`` and ``d(w, z) <= d(x, y)``.

        The point is taken on the geodesic x-y when ``d(x, y) >= d(y, z)``
        and on the geodesic y-z otherwise, so one of the two inequalities
        is an equality.
        """
        dxy = self.distance(x, y)
        dyz = self.distance(y, z)
        if dxy >= dyz:
            if dxy == 0:
                return x
            return self.geodesic_point(x, y, self._ratio(dyz, dxy))
        return self.geodesic_point(y, z, 1 - self._ratio(dxy, dyz))

    def _ratio(self, a, b):
        return float(a) / float(b)

    def _dedupe(self, points):
        seen = {}
        for p in points:
            seen.setdefault(self.key(p), p)
        return sorted(seen.values(), key=self.sort_key)


# ---------------------------------------------------------------- euclidean


class EuclideanP(GeodesicSpace):
    """``R^dim`` with the p-norm, ``1 < p <= inf``.

    Straight segments are the canonical geodesics; for ``p = inf`` the
    midpoint set is larger than the straight-line midpoint but only the
    latter is enumerated.
    """

    kind = "euclidean"

    def __init__(self, dim=1, p=2.0, h=0.1, eps_mid=1e-9):
        super().__init__(h, eps_mid)
        if int(dim) < 1:
            raise ValueError(f"dim must be a positive integer, got {dim}")
        p = float(p)
        if not p > 1:
            raise ValueError(f"p must lie in (1, inf], got {p}")
        self.dim = int(dim)
        self.p = p
        self.coordinate_names = tuple(f"x{i + 1}" for i in range(self.dim))

    def __repr__(self) -> str:
        return f"EuclideanP(dim={self.dim}, p={self.p}, h={self.h})"

    def point(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (list, tuple, np.ndarray)):
            coords = tuple(coords[0])
        x = EuclideanPoint(tuple(float(c) for c in coords))
        self.check(x)
        return x

    def check(self, x):
        if not isinstance(x, EuclideanPoint) or len(x.coords) != self.dim:
            raise DomainError(self, x, f"expected a {self.dim}-dimensional point")
        if not all(math.isfinite(c) for c in x.coords):
            raise DomainError(self, x, "coordinates must be finite")

    def key(self, x):
        return tuple(round(c, _KEY_DECIMALS) + 0.0 for c in x.coords)

    def sort_key(self, x):
        return x.coords

    def from_record(self, record):
        if "coords" in record:
            return self.point(*record["coords"])
        return self.point(*[record[n] for n in self.coordinate_names])

    def coordinate_values(self, x):
        return list(x.coords)

    @property
    def origin(self):
        return self.point(*([0.0] * self.dim))

    def distance(self, x, y):
        diff = np.subtract(x.coords, y.coords)
        return float(np.linalg.norm(diff, ord=self.p))

    def coordinates(self, points):
        return np.array([p.coords for p in points], dtype=float).reshape(-1, self.dim)

    def distances_from(self, x, coords):
        return np.linalg.norm(coords - np.asarray(x.coords), ord=self.p, axis=1)

    def geodesic_points(self, x, y, s):
        s = float(s)
        return [
            EuclideanPoint(tuple(a + s * (b - a) for a, b in zip(x.coords, y.coords)))
        ]

    def ball_sample(self, center, r):
        self.check(center)
        r = float(r)
        kmax = int(math.floor(r / self.h + 1e-9))
        axis = np.arange(-kmax, kmax + 1)
        grid = np.array(np.meshgrid(*([axis] * self.dim), indexing="ij"))
        steps = grid.reshape(self.dim, -1).T * self.h
        norms = np.linalg.norm(steps, ord=self.p, axis=1) if len(steps) else steps
        keep = steps[norms <= r + 1e-12]
        base = np.asarray(center.coords)
        pts = [EuclideanPoint(tuple(float(c) for c in base + row)) for row in keep]
        pts.append(center)
        return self._dedupe(pts)


# ---------------------------------------------------------------- half-line


class HalfLine(GeodesicSpace):
    """The closed half-line ``[0, inf)`` with ``d(x, y) = |x - y|``."""

    kind = "halfline"
    coordinate_names = ("x",)

    def __init__(self, h=0.01, eps_mid=1e-9):
        super().__init__(h, eps_mid)

    def point(self, x):
        p = HalfLinePoint(float(x))
        self.check(p)
        return p

    def check(self, x):
        if not isinstance(x, HalfLinePoint) or not math.isfinite(x.x):
            raise DomainError(self, x, "expected a finite HalfLinePoint")
        if x.x < 0:
            raise DomainError(self, x, "x must be nonnegative")

    def key(self, x):
        return round(x.x, _KEY_DECIMALS) + 0.0

    def sort_key(self, x):
        return x.x

    def from_record(self, record):
        return self.point(record["x"])

    @property
    def origin(self):
        return HalfLinePoint(0.0)

    def distance(self, x, y):
        return abs(x.x - y.x)

    def coordinates(self, points):
        return np.array([p.x for p in points], dtype=float)

    def distances_from(self, x, coords):
        return np.abs(coords - x.x)

    def ball_within(self, center, radius, x, r):
        lo, hi = max(x.x - r, 0.0), x.x + r
        return (lo >= max(center.x - radius, 0.0) - 1e-12
                and hi <= center.x + radius + 1e-12)

    def geodesic_points(self, x, y, s):
        return [HalfLinePoint(x.x + float(s) * (y.x - x.x))]

    def ball_sample(self, center, r):
        self.check(center)
        kmax = int(math.floor(float(r) / self.h + 1e-9))
        values = center.x + self.h * np.arange(-kmax, kmax + 1)
        values = values[values >= -1e-12]
        pts = [HalfLinePoint(max(float(v), 0.0)) for v in values]
        pts.append(center)
        return self._dedupe(pts)


# ---------------------------------------------------------------- cylinder


class Cylinder(GeodesicSpace):
    """The flat cylinder ``S^1 x R`` with its intrinsic metric.

    ``d((a, s), (b, t))`` is the minimum over integer windings ``n`` of
    ``sqrt((b - a + 2 pi n)^2 + (t - s)^2)``. Antipodal pairs are joined by
    two geodesics; branch 0 takes the winding with the smallest ``|n|``.
    """

    kind = "cylinder"
    coordinate_names = ("theta", "height")

    def __init__(self, h=0.1, eps_mid=1e-9):
        super().__init__(h, eps_mid)
        n = int(math.ceil(TWO_PI / h))
        # a multiple of 4 keeps antipodes and quarter turns on the grid
        self.n_theta = n + (-n) % 4
        self.dtheta = TWO_PI / self.n_theta

    def point(self, theta, height):
        p = CylinderPoint(float(theta) % TWO_PI, float(height))
        self.check(p)
        return p

    def check(self, x):
        if not isinstance(x, CylinderPoint):
            raise DomainError(self, x, "expected a CylinderPoint")
        if not (math.isfinite(x.theta) and math.isfinite(x.height)):
            raise DomainError(self, x, "coordinates must be finite")

    def key(self, x):
        theta = round(x.theta % TWO_PI, _KEY_DECIMALS)
        if theta >= round(TWO_PI, _KEY_DECIMALS):
            theta = 0.0
        return (theta + 0.0, round(x.height, _KEY_DECIMALS) + 0.0)

    def sort_key(self, x):
        return self.key(x)

    def from_record(self, record):
        return self.point(record["theta"], record["height"])

    @property
    def origin(self):
        return CylinderPoint(0.0, 0.0)

    def distance(self, x, y):
        dt = abs(x.theta - y.theta) % TWO_PI
        dt = min(dt, TWO_PI - dt)
        return math.hypot(dt, x.height - y.height)

    def coordinates(self, points):
        rows = [(p.theta, p.height) for p in points]
        return np.array(rows, dtype=float).reshape(-1, 2)

    def distances_from(self, x, coords):
        dt = np.abs(coords[:, 0] - x.theta) % TWO_PI
        dt = np.minimum(dt, TWO_PI - dt)
        return np.hypot(dt, coords[:, 1] - x.height)

    def windings(self, x, y):
        """Winding numbers of the geodesics from x to y, canonical order."""
        dtheta = y.theta - x.theta
        lengths = {n: abs(dtheta + TWO_PI * n) for n in (0, -1, 1)}
        best = min(lengths.values())
        tied = [n for n, length in lengths.items() if length <= best + self.eps_mid]
        return sorted(tied, key=lambda n: (abs(n), n))[:2]

    def geodesic_points(self, x, y, s):
        s = float(s)
        dtheta = y.theta - x.theta
        return [
            CylinderPoint(
                (x.theta + s * (dtheta + TWO_PI * n)) % TWO_PI,
                x.height + s * (y.height - x.height),
            )
            for n in self.windings(x, y)
        ]

    def midpoints(self, x, y):
        self.check(x)
        self.check(y)
        if self.key(x) == self.key(y):
            return [x]
        seen = {}
        for p in self.geodesic_points(x, y, 0.5):
            seen.setdefault(self.key(p), p)
        # keep branch order so midpoints(x, y)[b] is the branch b midpoint
        return list(seen.values())

    def ball_sample(self, center, r):
        self.check(center)
        r = float(r)
        half = self.n_theta // 2
        jmax = min(int(math.floor(r / self.dtheta + 1e-9)), half)
        js = np.arange(-jmax, jmax + 1)
        if jmax == half:
            js = js[js > -half]
        kmax = int(math.floor(r / self.h + 1e-9))
        ks = np.arange(-kmax, kmax + 1)
        jj, kk = np.meshgrid(js, ks, indexing="ij")
        angle = np.abs(jj) * self.dtheta
        dist = np.hypot(angle, kk * self.h)
        keep = dist <= r + 1e-12
        pts = [
            CylinderPoint(
                (center.theta + j * self.dtheta) % TWO_PI, center.height + k * self.h
            )
            for j, k in zip(jj[keep].tolist(), kk[keep].tolist())
        ]
        pts.append(center)
        return self._dedupe(pts)


# ---------------------------------------------------------------- lattice


def _is_int(value):
    return value == math.floor(value)


def _lattice_distance(x1, x2, y1, y2):
    # graph distance: l1 unless both points sit on parallel edges of one strip
    dx, dy = abs(x1 - y1), abs(x2 - y2)
    if not _is_int(x2) and not _is_int(y2) and x1 != y1:
        f = math.floor(x2)
        if math.floor(y2) == f:
            return dx + min(x2 + y2 - 2 * f, 2 * f + 2 - x2 - y2)
    if not _is_int(x1) and not _is_int(y1) and x2 != y2:
        f = math.floor(x1)
        if math.floor(y1) == f:
            return dy + min(x1 + y1 - 2 * f, 2 * f + 2 - x1 - y1)
    return dx + dy


class Lattice2(GeodesicSpace):
    """The square lattice graph ``Z x R  U  R x Z`` with unit edges.

    Coordinates are :class:`fractions.Fraction` values and ``h`` is a
    dyadic ``2^-m``, so distances, midpoints and ball samples are exact.
    Field values over lattice points are dyadic as well and are stored in
    float64 without rounding.

    Parameters
    ----------
    h: string, Fraction or float
        Sampling resolution, ``2^-m`` (e.g. ``"1/4"``).
    eps_mid: float, optional
        Kept at 0; the lattice arithmetic is exact.
    box: tuple, optional
        ``(lo, hi)`` bounding box applied to every coordinate by
        :meth:`check`.

    """

    kind = "lattice"
    coordinate_names = ("x1", "x2")

    def __init__(self, h="1/2", eps_mid=0.0, box=None):
        h = parse_dyadic(h)
        if h <= 0 or h.numerator != 1:
            raise ValueError(f"lattice resolution must be 2^-m, got {h}")
        super().__init__(h, eps_mid)
        self.box = None if box is None else (Fraction(box[0]), Fraction(box[1]))

    def __repr__(self) -> str:
        return f"Lattice2(h={self.h})"

    def point(self, x1, x2):
        p = LatticePoint(parse_dyadic(x1), parse_dyadic(x2))
        self.check(p)
        return p

    def check(self, x):
        if not isinstance(x, LatticePoint):
            raise DomainError(self, x, "expected a LatticePoint")
        if x.x1.denominator != 1 and x.x2.denominator != 1:
            raise DomainError(self, x, "one coordinate must be an integer")
        if self.box is not None:
            lo, hi = self.box
            if not (lo <= x.x1 <= hi and lo <= x.x2 <= hi):
                raise DomainError(self, x, f"outside the bounding box {lo}..{hi}")

    def key(self, x):
        return (x.x1, x.x2)

    def from_record(self, record):
        return self.point(record["x1"], record["x2"])

    @property
    def origin(self):
        return LatticePoint(Fraction(0), Fraction(0))

    def distance(self, x, y):
        return _lattice_distance(x.x1, x.x2, y.x1, y.x2)

    def _ratio(self, a, b):
        return Fraction(a) / Fraction(b)

    def coordinates(self, points):
        return np.array(
            [(float(p.x1), float(p.x2)) for p in points], dtype=float
        ).reshape(-1, 2)

    def distances_from(self, x, coords):
        x1, x2 = float(x.x1), float(x.x2)
        c1, c2 = coords[:, 0], coords[:, 1]
        d = np.abs(c1 - x1) + np.abs(c2 - x2)
        if x.x2.denominator != 1:
            f = math.floor(x2)
            mask = (np.floor(c2) != c2) & (np.floor(c2) == f) & (c1 != x1)
            if mask.any():
                detour = np.minimum(c2 + x2 - 2 * f, 2 * f + 2 - c2 - x2)
                d = np.where(mask, np.abs(c1 - x1) + detour, d)
        if x.x1.denominator != 1:
            f = math.floor(x1)
            mask = (np.floor(c1) != c1) & (np.floor(c1) == f) & (c2 != x2)
            if mask.any():
                detour = np.minimum(c1 + x1 - 2 * f, 2 * f + 2 - c1 - x1)
                d = np.where(mask, np.abs(c2 - x2) + detour, d)
        return d

    def _on_graph(self, z1, z2):
        return z1.denominator == 1 or z2.denominator == 1

    def _staircase(self, x, y, a):
        # points at l1 distance a from x on monotone paths inside the box
        d1, d2 = y.x1 - x.x1, y.x2 - x.x2
        s1 = (d1 > 0) - (d1 < 0)
        s2 = (d2 > 0) - (d2 < 0)
        lo, hi = max(Fraction(0), a - abs(d2)), min(abs(d1), a)
        if lo > hi:
            return []
        alphas = {lo, hi}
        if s1:
            ends = sorted((x.x1 + s1 * lo, x.x1 + s1 * hi))
            for k in range(math.ceil(ends[0]), math.floor(ends[1]) + 1):
                alphas.add(s1 * (k - x.x1))
        if s2:
            ends = sorted((x.x2 + s2 * (a - lo), x.x2 + s2 * (a - hi)))
            for k in range(math.ceil(ends[0]), math.floor(ends[1]) + 1):
                alphas.add(a - s2 * (k - x.x2))
        out = []
        for alpha in alphas:
            if lo <= alpha <= hi:
                out.append((x.x1 + s1 * alpha, x.x2 + s2 * (a - alpha)))
        return out

    def _detours(self, x, y):
        # waypoint paths for two points on parallel edges of one strip
        paths = []
        if x.x2.denominator != 1 and y.x2.denominator != 1 and x.x1 != y.x1:
            f = math.floor(x.x2)
            if math.floor(y.x2) == f:
                for c in (f, f + 1):
                    paths.append([(x.x1, x.x2), (x.x1, Fraction(c)),
                                  (y.x1, Fraction(c)), (y.x1, y.x2)])
        if x.x1.denominator != 1 and y.x1.denominator != 1 and x.x2 != y.x2:
            f = math.floor(x.x1)
            if math.floor(y.x1) == f:
                for c in (f, f + 1):
                    paths.append([(x.x1, x.x2), (Fraction(c), x.x2),
                                  (Fraction(c), y.x2), (y.x1, y.x2)])
        return paths

    @staticmethod
    def _walk(path, a):
        for (p1, p2), (q1, q2) in zip(path[:-1], path[1:]):
            seg = abs(q1 - p1) + abs(q2 - p2)
            if a <= seg:
                if seg == 0:
                    return (p1, p2)
                t = a / seg
                return (p1 + t * (q1 - p1), p2 + t * (q2 - p2))
            a -= seg
        return path[-1]

    def geodesic_points(self, x, y, s):
        """Every point at arc length ``s * d(x, y)`` on some geodesic.

        Candidates are the graph points of the monotone staircase region
        and of the detour paths; each is kept only if the two distances
        add up exactly. Points are returned in lexicographic order, which
        defines the branch numbering.
        """
        d = self.distance(x, y)
        a = Fraction(s) * d
        candidates = self._staircase(x, y, a)
        candidates += [self._walk(path, a) for path in self._detours(x, y)]
        found = {}
        for z1, z2 in candidates:
            if not self._on_graph(z1, z2):
                continue
            if _lattice_distance(x.x1, x.x2, z1, z2) != a:
                continue
            if _lattice_distance(z1, z2, y.x1, y.x2) != d - a:
                continue
            found[(z1, z2)] = LatticePoint(z1, z2)
        return [found[k] for k in sorted(found)]

    def ball_sample(self, center, r):
        """All lattice points with coordinates on the ``h`` grid in ``B_r``."""
        self.check(center)
        r = Fraction(r)
        c1, c2 = center.x1, center.x2
        h = self.h
        pts = {}
        lines = range(math.floor(c1 - r) - 1, math.ceil(c1 + r) + 2)
        steps = range(math.floor((c2 - r) / h) - 1, math.ceil((c2 + r) / h) + 2)
        cols = range(math.floor(c2 - r) - 1, math.ceil(c2 + r) + 2)
        csteps = range(math.floor((c1 - r) / h) - 1, math.ceil((c1 + r) / h) + 2)
        grid = [(i, j * h) for i in lines for j in steps]
        grid += [(j * h, i) for i in cols for j in csteps]
        coords = np.array([(float(a), float(b)) for a, b in grid], dtype=float)
        dist = self.distances_from(center, coords)
        for (a, b), dd in zip(grid, dist):
            if dd <= float(r) + 1e-9 and Fraction(float(dd)) <= r:
                p = LatticePoint(Fraction(a), Fraction(b))
                if self.box is not None:
                    lo, hi = self.box
                    if not (lo <= p.x1 <= hi and lo <= p.x2 <= hi):
                        continue
                pts[(p.x1, p.x2)] = p
        pts[(c1, c2)] = center
        return [pts[k] for k in sorted(pts)]


# ---------------------------------------------------------------- trees


class Tree(GeodesicSpace):
    """A finite metric tree.

    Points are ``(edge index, offset from the edge's first vertex)``.
    Vertices are shared by several edges; each vertex is represented by
    its lexicographically smallest ``(edge, offset)`` pair, see
    :meth:`canonical`.

    Parameters
    ----------
    edges: list of (u, v, length)
        Edge list of a tree with positive (rational) lengths.
    h: float
        Sampling resolution.
    root: hashable, optional
        Vertex used as root for the ancestor bookkeeping, default the
        first vertex of the first edge.

    """

    kind = "tree"
    coordinate_names = ("edge", "offset")

    def __init__(self, edges, h=0.125, eps_mid=1e-9, root=None):
        super().__init__(h, eps_mid)
        if not edges:
            raise ValueError("a tree needs at least one edge")
        graph = nx.Graph()
        self.edges = []
        for i, (u, v, length) in enumerate(edges):
            if isinstance(length, str):
                length = Fraction(length)
            length = float(length)
            if length <= 0:
                raise ValueError(f"edge {i} has nonpositive length {length}")
            if graph.has_edge(u, v):
                raise ValueError(f"duplicate edge {u}-{v}")
            graph.add_edge(u, v, length=length, index=i)
            self.edges.append((u, v, length))
        if not nx.is_tree(graph):
            raise ValueError("edge list does not describe a tree")
        self.graph = graph
        self.vertices = sorted(graph.nodes, key=str)
        self._vindex = {w: i for i, w in enumerate(self.vertices)}
        lengths = dict(nx.all_pairs_dijkstra_path_length(graph, weight="length"))
        n = len(self.vertices)
        self._vdist = np.zeros((n, n))
        for a, row in lengths.items():
            for b, value in row.items():
                self._vdist[self._vindex[a], self._vindex[b]] = value
        self.root = self.edges[0][0] if root is None else root
        rooted = nx.bfs_tree(graph, self.root)
        self._parent = {v: u for u, v in rooted.edges}
        self._depth = nx.shortest_path_length(rooted, self.root)
        self._rep = {}
        for i, (u, v, length) in enumerate(self.edges):
            for w, off in ((u, 0.0), (v, length)):
                if w not in self._rep or (i, off) < self._rep[w]:
                    self._rep[w] = (i, off)
        self._u = np.array([self._vindex[u] for u, _, _ in self.edges])
        self._v = np.array([self._vindex[v] for _, v, _ in self.edges])
        self._len = np.array([length for _, _, length in self.edges])

    def __repr__(self) -> str:
        return f"{type(self).__name__}(edges={len(self.edges)}, h={self.h})"

    def point(self, edge, offset):
        p = TreePoint(int(edge), float(offset))
        self.check(p)
        return self.canonical(p)

    def vertex(self, w):
        edge, offset = self._rep[w]
        return TreePoint(edge, offset)

    def check(self, x):
        if not isinstance(x, TreePoint):
            raise DomainError(self, x, "expected a TreePoint")
        if not 0 <= x.edge < len(self.edges):
            raise DomainError(self, x, "unknown edge")
        length = self.edges[x.edge][2]
        if not -self.eps_mid <= x.offset <= length + self.eps_mid:
            raise DomainError(self, x, f"offset outside [0, {length}]")

    def canonical(self, x):
        u, v, length = self.edges[x.edge]
        if x.offset <= self.eps_mid:
            return self.vertex(u)
        if x.offset >= length - self.eps_mid:
            return self.vertex(v)
        return x

    def key(self, x):
        x = self.canonical(x)
        return (x.edge, round(x.offset, _KEY_DECIMALS) + 0.0)

    def sort_key(self, x):
        return self.key(x)

    def from_record(self, record):
        return self.point(record["edge"], record["offset"])

    @property
    def origin(self):
        return self.vertex(self.root)

    def _vertex_distances(self, x):
        # distance from x to every vertex
        u, v, length = self.edges[x.edge]
        du = self._vdist[self._vindex[u]]
        dv = self._vdist[self._vindex[v]]
        return np.minimum(x.offset + du, length - x.offset + dv)

    def distance(self, x, y):
        if x.edge == y.edge:
            return abs(x.offset - y.offset)
        to_vertices = self._vertex_distances(x)
        u, v, length = self.edges[y.edge]
        return float(min(
            y.offset + to_vertices[self._vindex[u]],
            length - y.offset + to_vertices[self._vindex[v]],
        ))

    def coordinates(self, points):
        rows = [(p.edge, p.offset) for p in points]
        return np.array(rows, dtype=float).reshape(-1, 2)

    def distances_from(self, x, coords):
        to_vertices = self._vertex_distances(x)
        edge = coords[:, 0].astype(int)
        off = coords[:, 1]
        d = np.minimum(
            off + to_vertices[self._u[edge]],
            self._len[edge] - off + to_vertices[self._v[edge]],
        )
        same = edge == x.edge
        d[same] = np.abs(off[same] - x.offset)
        return d

    def eccentricity(self, center):
        return float(self._vertex_distances(center).max())

    def _vertex_path(self, a, b):
        # climb to the lowest common ancestor from both ends
        up, down = [a], [b]
        while self._depth[up[-1]] > self._depth[down[-1]]:
            up.append(self._parent[up[-1]])
        while self._depth[down[-1]] > self._depth[up[-1]]:
            down.append(self._parent[down[-1]])
        while up[-1] != down[-1]:
            up.append(self._parent[up[-1]])
            down.append(self._parent[down[-1]])
        return up + down[-2::-1]

    def _offset_on(self, edge, w):
        u, v, length = self.edges[edge]
        return 0.0 if w == u else length

    def _segments(self, x, y):
        """Geodesic from x to y as a list of ``(edge, start, end)`` pieces."""
        if x.edge == y.edge:
            return [(x.edge, x.offset, y.offset)]
        ux, vx, lx = self.edges[x.edge]
        uy, vy, ly = self.edges[y.edge]
        best = None
        for a, da in ((ux, x.offset), (vx, lx - x.offset)):
            for b, db in ((uy, y.offset), (vy, ly - y.offset)):
                total = da + self._vdist[self._vindex[a], self._vindex[b]] + db
                if best is None or total < best[0] - 1e-15:
                    best = (total, a, b)
        _, a, b = best
        pieces = [(x.edge, x.offset, self._offset_on(x.edge, a))]
        path = self._vertex_path(a, b)
        for w1, w2 in zip(path[:-1], path[1:]):
            idx = self.graph.edges[w1, w2]["index"]
            pieces.append((idx, self._offset_on(idx, w1), self._offset_on(idx, w2)))
        pieces.append((y.edge, self._offset_on(y.edge, b), y.offset))
        return pieces

    def geodesic_points(self, x, y, s):
        target = float(s) * self.distance(x, y)
        pieces = self._segments(x, y)
        for edge, start, end in pieces:
            length = abs(end - start)
            if target <= length + 1e-15:
                step = min(target, length)
                offset = start + step if end >= start else start - step
                return [self.canonical(TreePoint(edge, offset))]
            target -= length
        return [self.canonical(y)]

    def ball_sample(self, center, r):
        self.check(center)
        pts = [center]
        for i, (_, _, length) in enumerate(self.edges):
            offsets = np.arange(0, int(math.floor(length / self.h + 1e-9)) + 1) * self.h
            offsets = np.append(offsets, length)
            pts += [TreePoint(i, float(min(o, length))) for o in offsets]
        pts = [self.canonical(p) for p in pts]
        coords = self.coordinates(pts)
        dist = self.distances_from(center, coords)
        kept = [p for p, dd in zip(pts, dist) if dd <= float(r) + 1e-12]
        return self._dedupe(kept)


class Cross(Tree):
    """``{0} x R  U  R_+ x {0}`` with arms truncated at length ``arm``.

    Edge 0 is the upper arm ``{0} x R_+``, edge 1 the lower arm
    ``{0} x R_-`` and edge 2 the right arm ``R_+ x {0}``; every geodesic
    interior point of the infinite set is interior here as long as it
    stays away from the arm ends.
    """

    kind = "cross"

    def __init__(self, arm=8.0, h=0.125, eps_mid=1e-9):
        super().__init__(
            [("o", "up", arm), ("o", "down", arm), ("o", "right", arm)],
            h=h,
            eps_mid=eps_mid,
            root="o",
        )
        self.arm = float(arm)

    def __repr__(self) -> str:
        return f"Cross(arm={self.arm}, h={self.h})"

    def planar(self, x1, x2):
        p = cross_point(x1, x2)
        self.check(p)
        return self.canonical(p)


def cross_point(x1, x2):
    """Point of the cross space given planar coordinates."""
    x1, x2 = float(x1), float(x2)
    if x1 != 0 and x2 != 0:
        raise DomainError("cross", (x1, x2), "one coordinate must vanish")
    if x1 < 0:
        raise DomainError("cross", (x1, x2), "x1 must be nonnegative")
    if x1 > 0:
        return TreePoint(2, x1)
    if x2 >= 0:
        return TreePoint(0, x2)
    return TreePoint(1, -x2)


def cross_coordinates(point):
    """Planar coordinates of a cross space point."""
    if point.edge == 0:
        return (0.0, point.offset)
    if point.edge == 1:
        return (0.0, -point.offset)
    return (point.offset, 0.0)


def cross_space(arm=8.0, h=0.125, eps_mid=1e-9):
    return Cross(arm=arm, h=h, eps_mid=eps_mid)


def star_tree(arms=3, length=1.0, h=0.125, eps_mid=1e-9):
    """Star with ``arms`` edges of equal ``length`` around vertex ``"c"``."""
    edges = [("c", f"leaf{i}", length) for i in range(arms)]
    return Tree(edges, h=h, eps_mid=eps_mid, root="c")


# ---------------------------------------------------------------- functions


def _as_space(space):
    if isinstance(space, SpaceConfig):
        return space.build()
    return space


def dist(space, x, y):
    """Geodesic distance between two points.

    Parameters
    ----------
    space: GeodesicSpace or SpaceConfig
    x, y: points of ``space``

    Returns
    -------
    distance: float, or Fraction on :class:`Lattice2`

    Examples
    --------
    .. doctest::

        >>> lattice = hjconvexity.spaces.Lattice2(h="1/2")
        >>> hjconvexity.spaces.dist(lattice, lattice.point(0, 0), lattice.point(1, 1))
        Fraction(2, 1)

    """
    space = _as_space(space)
    space.check(x)
    space.check(y)
    return space.distance(x, y)


def geodesic_point(space, x, y, s, branch=0):
    """Point at parameter ``s`` on the ``branch``-th geodesic from x to y."""
    return _as_space(space).geodesic_point(x, y, s, branch)


def midpoints(space, x, y):
    """All midpoints of x and y, deduplicated at ``eps_mid``."""
    return _as_space(space).midpoints(x, y)


def ball_sample(space, center, r):
    """Finite sample of the closed ball ``B_r(center)`` at resolution ``h``."""
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return _as_space(space).ball_sample(center, r)


def separate(space, x, y, z):
    """Separation point ``w`` with ``d(x, w) <= d(y, z)``, ``d(w, z) <= d(x, y)``."""
    space = _as_space(space)
    for p in (x, y, z):
        space.check(p)
    return space.separate(x, y, z)


def space_from_config(config):
    """Build a space from a ``[space]`` table.

    Parameters
    ----------
    config: dict
        Must contain ``kind``; other keys are kind specific.

    Raises
    ------
    TypeError
        If ``kind`` is unknown.

    """
    config = dict(config)
    kind = config.pop("kind", None)
    eps_mid = config.pop("eps_mid", None)
    h = config.pop("h", None)
    for unused in ("center", "radius"):
        config.pop(unused, None)
    opts = {} if eps_mid is None else {"eps_mid": float(eps_mid)}

    if kind == "euclidean":
        return EuclideanP(
            dim=config.get("dim", 1),
            p=float(config.get("p", 2.0)),
            h=float(h if h is not None else 0.1),
            **opts,
        )
    elif kind == "halfline":
        return HalfLine(h=float(h if h is not None else 0.01), **opts)
    elif kind == "cylinder":
        return Cylinder(h=float(h if h is not None else 0.1), **opts)
    elif kind == "lattice":
        return Lattice2(h=h if h is not None else "1/2", box=config.get("box"), **opts)
    elif kind == "tree":
        if "edges" not in config and "arms" in config:
            return star_tree(
                arms=int(config["arms"]),
                length=float(config.get("length", 1.0)),
                h=float(parse_dyadic(h)) if h is not None else 0.125,
                **opts,
            )
        if "edges" not in config:
            raise ValueError("a tree space needs an 'edges' list or 'arms'")
        return Tree(
            [tuple(e) for e in config["edges"]],
            h=float(parse_dyadic(h)) if h is not None else 0.125,
            root=config.get("root"),
            **opts,
        )
    elif kind == "cross":
        return Cross(
            arm=float(config.get("arm", 8.0)),
            h=float(parse_dyadic(h)) if h is not None else 0.125,
            **opts,
        )
    else:
        raise TypeError(
            f"Unrecognized space kind: {kind!r}; expected one of euclidean, "
            "halfline, cylinder, lattice, tree, cross"
        )


def sorted_points(space, points: Sequence):
    """Points in the canonical order used for fields and CSV output."""
    return sorted(points, key=space.sort_key)
