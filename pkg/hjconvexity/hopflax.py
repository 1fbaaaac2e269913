"""
Hopf-Lax solution operators on sampled geodesic spaces.

``solve_inf`` evaluates ``u(x, t) = inf_a { u0(a) + t L(d(a, x)/t) }``,
the solution of ``u_t + H(|grad u|) = 0``; ``solve_sup`` evaluates
``sup_a { u0(a) - t L(d(a, x)/t) }`` for ``u_t - H(|grad u|) = 0``; and
``solve_eikonal`` is the running extremum of ``u0`` over ``B_t(x)``. The
candidate set of every point is the part of the sampled patch inside
``B_{Vt}(x)`` where ``V`` is the finite propagation speed.

Points whose candidate ball leaves the sampled patch are marked
incomplete; every report and check reads complete points only.
"""

import time
import warnings
from typing import Optional

import numpy as np
import pandas as pd

from hjconvexity.hamiltonian import (
    LagrangianTable,
    legendre,
    linear_hamiltonian,
    power_hamiltonian,
    speed_bound,
)
from hjconvexity.spaces import EuclideanP, HalfLine, Lattice2
from hjconvexity.utils import (
    BaseReport,
    ResolutionError,
    SolveError,
    chunks,
    parallel_map,
)


class ScalarField:
    """A finite map from sample points of a space to extended reals.

    Parameters
    ----------
    space: :obj:`hjconvexity.spaces.GeodesicSpace`
    points: sequence of points
        Sample points; stored in the space's canonical order.
    values: array-like
        One value per point, ``+-inf`` allowed.
    lipschitz: float, optional
        Declared Lipschitz constant ``K``.
    patch: tuple, optional
        ``(center, radius)`` of the sampled ball the points come from.
    valid: array-like of bool, optional
        Points whose value is trustworthy (complete solves).
    name: string, optional

    """

    def __init__(self, space, points, values, lipschitz=None, patch=None,
                 valid=None, name="u"):
        points = list(points)
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(points) != len(values):
            raise ValueError(
                f"{len(points)} points but {len(values)} values were given"
            )
        valid = (np.ones(len(points), dtype=bool) if valid is None
                 else np.asarray(valid, dtype=bool).reshape(-1))
        order = sorted(range(len(points)), key=lambda i: space.sort_key(points[i]))
        self.space = space
        self.points = tuple(points[i] for i in order)
        self.values = values[order]
        self.values.setflags(write=False)
        self.valid = valid[order]
        self.valid.setflags(write=False)
        self.lipschitz = None if lipschitz is None else float(lipschitz)
        self.patch = patch
        self.name = name
        self.coords = space.coordinates(self.points)
        self.coords.setflags(write=False)
        self._index = {space.key(p): i for i, p in enumerate(self.points)}

    @classmethod
    def from_function(cls, space, points, func, lipschitz=None, patch=None, name="u"):
        values = [func(p) for p in points]
        return cls(space, points, values, lipschitz=lipschitz, patch=patch, name=name)

    @classmethod
    def on_patch(cls, space, center, radius, func, lipschitz=None, name="u0"):
        """Sample ``func`` on ``ball_sample(center, radius)``.

        Examples
        --------
        .. doctest::

            >>> line = hjconvexity.spaces.HalfLine(h=0.5)
            >>> u0 = hjconvexity.hopflax.ScalarField.on_patch(
            ...     line, line.point(3), 1, lambda p: -p.x, lipschitz=1
            ... )
            >>> u0.values.tolist()
            [-2.0, -2.5, -3.0, -3.5, -4.0]

        """
        points = space.ball_sample(center, radius)
        return cls.from_function(space, points, func, lipschitz=lipschitz,
                                 patch=(center, radius), name=name)

    def __len__(self):
        return len(self.points)

    def __repr__(self) -> str:
        return f"ScalarField(name={self.name}, points={len(self)}, K={self.lipschitz})"

    def with_values(self, values, valid=None, lipschitz="keep", name=None):
        """A field on the same points with new values (already in order)."""
        new = object.__new__(ScalarField)
        new.space = self.space
        new.points = self.points
        new.values = np.asarray(values, dtype=float).copy()
        new.values.setflags(write=False)
        new.valid = (self.valid.copy() if valid is None
                     else np.asarray(valid, dtype=bool).copy())
        new.valid.setflags(write=False)
        new.lipschitz = self.lipschitz if lipschitz == "keep" else lipschitz
        new.patch = self.patch
        new.name = self.name if name is None else name
        new.coords = self.coords
        new._index = self._index
        return new

    def index_of(self, point):
        """Index of ``point`` among the samples, or None."""
        i = self._index.get(self.space.key(point))
        if i is not None:
            return i
        d = self.space.distances_from(point, self.coords)
        j = int(np.argmin(d))
        if float(d[j]) <= max(self.space.eps_mid, 1e-12):
            return j
        return None

    def value_at(self, point):
        i = self.index_of(point)
        if i is None:
            raise ResolutionError("point is not a sample of the field", point)
        return float(self.values[i])

    def interior(self, r):
        """Mask of valid points whose ``r``-ball lies inside the patch."""
        if self.patch is None:
            return self.valid.copy()
        center, radius = self.patch
        inside = np.array(
            [self.space.ball_within(center, radius, p, r) for p in self.points],
            dtype=bool,
        )
        return inside & self.valid

    def to_frame(self):
        """The field as a DataFrame in canonical point order."""
        rows = [self.space.coordinate_values(p) for p in self.points]
        df = pd.DataFrame(rows, columns=list(self.space.coordinate_names))
        df["value"] = self.values
        df["valid"] = self.valid
        return df

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)

    @classmethod
    def from_csv(cls, space, path, lipschitz=None, name="u0"):
        """Read a field written by :meth:`to_csv`."""
        df = pd.read_csv(path, dtype=str)
        missing = [c for c in (*space.coordinate_names, "value") if c not in df.columns]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        points = [
            space.from_coordinate_values(list(row))
            for row in df[list(space.coordinate_names)].itertuples(index=False)
        ]
        valid = None
        if "valid" in df.columns:
            valid = df["valid"].str.lower().eq("true").to_numpy()
        return cls(space, points, df["value"].astype(float).to_numpy(),
                   lipschitz=lipschitz, valid=valid, name=name)


class SolveReport(BaseReport):
    """Result of a Hopf-Lax or eikonal solve.

    Attributes
    ----------
    field: :obj:`ScalarField`
        ``u(., t)``; ``field.valid`` marks complete points.
    witnesses: numpy.ndarray
        Index (into ``field.points``) of the minimiser/maximiser per point.
    candidates: numpy.ndarray
        Candidate-set size per point.
    complete: numpy.ndarray
        True where the candidate ball lies inside the sampled patch.

    """

    def __init__(self, field, witnesses, candidates, complete, t, sense,
                 radius, speed, wall_time, method):
        super().__init__(
            f"solve_{method}",
            parameters={"t": t, "sense": sense, "radius": radius, "speed": speed},
            wall_time=wall_time,
        )
        self.field = field
        self.witnesses = witnesses
        self.candidates = candidates
        self.complete = complete
        self.t = t
        self.sense = sense
        self.radius = radius
        self.speed = speed
        self.method = method

    @property
    def passed(self):
        return True

    @property
    def values(self):
        return self.field.values

    def witness(self, point):
        """The minimiser/maximiser recorded for ``point``."""
        i = self.field.index_of(point)
        if i is None:
            raise ResolutionError("point is not a sample of the field", point)
        return self.field.points[self.witnesses[i]]

    def value_at(self, point):
        return self.field.value_at(point)

    def to_frame(self):
        df = self.field.to_frame().drop(columns="valid")
        df["witness"] = [self.field.points[w].label() for w in self.witnesses]
        df["candidates"] = self.candidates
        df["complete"] = self.complete
        return df

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)

    def to_record(self):
        complete = self.field.values[self.complete]
        return {
            "report": "SolveReport",
            "method": self.method,
            "parameters": self.parameters,
            "points": len(self.field),
            "complete_points": int(self.complete.sum()),
            "max_candidates": int(self.candidates.max()) if len(self.candidates) else 0,
            "min_value": float(complete.min()) if len(complete) else None,
            "max_value": float(complete.max()) if len(complete) else None,
            "wall_time": self.wall_time,
            "notes": self.notes,
        }


def _default_tol(space):
    return 0.0 if isinstance(space, Lattice2) else 1e-9


def _evaluate(space, u0, lagrangian, t, sense, radius, threads):
    # one row per sample point; rows are independent
    coords = u0.coords
    values = u0.values
    eps = space.eps_mid
    n = len(u0)

    def block(rows):
        out = []
        for i in rows:
            d = space.distances_from(u0.points[i], coords)
            idx = np.flatnonzero(d <= radius + eps)
            if lagrangian is None:
                cost = np.zeros(len(idx))
            else:
                cost = t * lagrangian(d[idx] / t)
            if sense == "inf":
                cand = np.where(np.isinf(cost), np.inf, values[idx] + cost)
                j = int(np.argmin(cand))
                if cand[j] == np.inf:
                    raise SolveError(
                        f"every candidate of {u0.points[i].label()} is +inf"
                    )
            else:
                cand = np.where(np.isinf(cost), -np.inf, values[idx] - cost)
                j = int(np.argmax(cand))
                if cand[j] == -np.inf:
                    raise SolveError(
                        f"every candidate of {u0.points[i].label()} is -inf"
                    )
            complete = bool(u0.valid[idx].all())
            out.append((float(cand[j]), int(idx[j]), len(idx), complete))
        return out

    results = parallel_map(block, chunks(n, max(1, threads) * 4), threads)
    flat = [row for part in results for row in part]
    vals = np.array([r[0] for r in flat], dtype=float)
    wit = np.array([r[1] for r in flat], dtype=int)
    counts = np.array([r[2] for r in flat], dtype=int)
    valid_cands = np.array([r[3] for r in flat], dtype=bool)
    return vals, wit, counts, valid_cands


def _completeness(space, u0, radius):
    if u0.patch is None:
        return np.ones(len(u0), dtype=bool)
    center, patch_radius = u0.patch
    return np.array(
        [space.ball_within(center, patch_radius, p, radius) for p in u0.points],
        dtype=bool,
    )


def _candidate_speed(u0, L):
    if u0.lipschitz is not None:
        return speed_bound(L, u0.lipschitz)
    if L.is_linear_growth:
        return L.slope_limit + 10.0 * L.cell
    raise SolveError(
        "u0 has no declared Lipschitz constant and L is not of linear growth; "
        "the candidate set cannot be bounded"
    )


def _solve(space, u0, lagrangian, t, sense, radius, threads, method, speed):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    start = time.perf_counter()
    vals, wit, counts, valid_cands = _evaluate(
        space, u0, lagrangian, t, sense, radius, threads
    )
    complete = _completeness(space, u0, radius) & valid_cands
    field = u0.with_values(vals, valid=complete, name=f"u(t={t:g})")
    return SolveReport(
        field, wit, counts, complete, t, sense, radius, speed,
        time.perf_counter() - start, method,
    )


def _probe_widening(space, u0, L, t, sense, report, tol, samples=16):
    # re-evaluate a few points with a doubled candidate radius
    radius = 2.0 * report.radius
    ok = np.flatnonzero(_completeness(space, u0, radius) & report.complete)
    if len(ok) == 0:
        return 0.0
    picks = ok[np.linspace(0, len(ok) - 1, min(samples, len(ok))).astype(int)]
    worst = 0.0
    for i in picks:
        d = space.distances_from(u0.points[i], u0.coords)
        idx = np.flatnonzero(d <= radius + space.eps_mid)
        cost = t * L(d[idx] / t)
        if sense == "inf":
            value = np.min(np.where(np.isinf(cost), np.inf, u0.values[idx] + cost))
        else:
            value = np.max(np.where(np.isinf(cost), -np.inf, u0.values[idx] - cost))
        worst = max(worst, abs(float(value) - float(report.values[i])))
    if worst > tol:
        warnings.warn(
            f"Doubling the candidate radius changed a value by {worst:.3g} "
            f"(> {tol:g}); the propagation speed bound may be too small.",
            UserWarning,
        )
    report.parameters["widening_change"] = worst
    return worst


def solve_inf(space, u0, L, t, tol=None, threads=1, radius_factor=1.0,
              check_radius=True):
    """Hopf-Lax infimum ``inf_a { u0(a) + t L(d(a, x)/t) }``.

    Parameters
    ----------
    space: :obj:`hjconvexity.spaces.GeodesicSpace`
    u0: :obj:`ScalarField`
        Initial datum with a declared Lipschitz constant (unless ``L`` has
        linear growth).
    L: :obj:`hjconvexity.hamiltonian.LagrangianTable`
    t: float
        Positive time.
    tol: float, optional
        Solver tolerance, default 1e-9 (0 on the lattice).
    threads: int
        Worker threads; the result does not depend on it.
    radius_factor: float
        Multiplier applied to ``V t``.
    check_radius: bool
        Re-evaluate a subsample with twice the radius and warn on change.

    Returns
    -------
    report: :obj:`SolveReport`

    Examples
    --------
    .. doctest::

        >>> line = hjconvexity.spaces.EuclideanP(dim=1, h=0.5)
        >>> u0 = hjconvexity.hopflax.ScalarField.on_patch(
        ...     line, line.point(0), 4, lambda p: 2.0, lipschitz=0
        ... )
        >>> L = hjconvexity.hamiltonian.legendre(
        ...     hjconvexity.hamiltonian.quadratic_hamiltonian()
        ... )
        >>> set(hjconvexity.hopflax.solve_inf(line, u0, L, 1.0).values)
        {2.0}

    """
    tol = _default_tol(space) if tol is None else tol
    speed = _candidate_speed(u0, L)
    report = _solve(space, u0, L, t, "inf", speed * t * radius_factor, threads,
                    "inf", speed)
    if check_radius:
        _probe_widening(space, u0, L, t, "inf", report, tol)
    return report


def solve_sup(space, u0, L, t, tol=None, threads=1, radius_factor=1.0,
              check_radius=True):
    """Hopf-Lax supremum ``sup_a { u0(a) - t L(d(a, x)/t) }``.

    Same parameters as :func:`solve_inf`.
    """
    tol = _default_tol(space) if tol is None else tol
    speed = _candidate_speed(u0, L)
    report = _solve(space, u0, L, t, "sup", speed * t * radius_factor, threads,
                    "sup", speed)
    if check_radius:
        _probe_widening(space, u0, L, t, "sup", report, tol)
    return report


def solve_eikonal(space, u0, t, sign="inf", threads=1):
    """Running extremum of ``u0`` over ``B_t(x)``.

    ``sign="inf"`` solves ``u_t + |grad u| = 0`` and ``sign="sup"`` solves
    ``u_t - |grad u| = 0``.
    """
    if sign not in ("inf", "sup"):
        raise ValueError(f"sign must be 'inf' or 'sup', got {sign!r}")
    return _solve(space, u0, None, t, sign, float(t), threads, "eikonal", 1.0)


def eikonal_lagrangian():
    """Conjugate of ``H(p) = p``: 0 on ``[0, 1]`` and ``+inf`` beyond."""
    return legendre(linear_hamiltonian())


def _solve_with(space, u0, L, t, sense, threads):
    if L is None:
        return solve_eikonal(space, u0, t, sign=sense, threads=threads)
    if sense == "inf":
        return solve_inf(space, u0, L, t, threads=threads, check_radius=False)
    return solve_sup(space, u0, L, t, threads=threads, check_radius=False)


class ConsistencyReport(BaseReport):
    """Max discrepancy of a consistency check with the point attaining it."""

    def __init__(self, name, discrepancy, witness, tolerance, parameters,
                 checked, wall_time=0.0):
        super().__init__(name, parameters=parameters, wall_time=wall_time)
        self.discrepancy = float(discrepancy)
        self.witness = witness
        self.tolerance = float(tolerance)
        self.checked = int(checked)

    @property
    def passed(self):
        return self.discrepancy <= self.tolerance

    def to_record(self):
        return {
            "report": self.name,
            "verdict": self.verdict,
            "discrepancy": self.discrepancy,
            "tolerance": self.tolerance,
            "witness": None if self.witness is None else self.witness.to_record(),
            "checked": self.checked,
            "parameters": self.parameters,
            "notes": self.notes,
        }


def _max_gap(a, b, mask, points):
    diff = np.abs(np.where(mask, a - b, 0.0))
    # equal infinities count as agreement
    diff = np.where(mask & (a == b), 0.0, diff)
    if not mask.any():
        return 0.0, None
    i = int(np.argmax(diff))
    return float(diff[i]), points[i]


def dpp_check(space, u0, L, s, t, tol=None, slack=None, sense="inf", threads=1):
    """Dynamic programming principle ``u(t) = HL_{t-s}(u(s))``.

    Solves directly at ``t`` and by composing a solve at ``s`` with one of
    length ``t - s``; the discrepancy is taken over points complete in both.
    ``L=None`` selects the eikonal operators.

    Parameters
    ----------
    slack: float, optional
        Discretisation allowance added to ``tol``, default ``2 h`` (0 on the
        lattice, where the check is exact).

    """
    if not 0 < s < t:
        raise ValueError(f"need 0 < s < t, got s={s}, t={t}")
    tol = _default_tol(space) if tol is None else tol
    if slack is None:
        slack = 0.0 if isinstance(space, Lattice2) else 2.0 * float(space.h)
    start = time.perf_counter()
    direct = _solve_with(space, u0, L, t, sense, threads)
    first = _solve_with(space, u0, L, s, sense, threads)
    composed = _solve_with(space, first.field, L, t - s, sense, threads)
    mask = direct.complete & composed.complete
    gap, witness = _max_gap(direct.values, composed.values, mask, u0.points)
    return ConsistencyReport(
        "dpp_check", gap, witness, tol + slack,
        {"s": s, "t": t, "sense": sense}, int(mask.sum()),
        time.perf_counter() - start,
    )


def radius_doubling_check(space, u0, L, t, tol=None, sense="inf", threads=1):
    """Largest change when the candidate radius grows from ``Vt`` to ``2Vt``."""
    tol = _default_tol(space) if tol is None else tol
    solver = solve_inf if sense == "inf" else solve_sup
    base = solver(space, u0, L, t, threads=threads, check_radius=False)
    wide = solver(space, u0, L, t, threads=threads, radius_factor=2.0,
                  check_radius=False)
    mask = base.complete & wide.complete
    gap, witness = _max_gap(base.values, wide.values, mask, u0.points)
    return ConsistencyReport(
        "radius_doubling_check", gap, witness, tol,
        {"t": t, "sense": sense, "radius": base.radius}, int(mask.sum()),
    )


class ResidualReport(ConsistencyReport):
    """Residual of ``u_t + sign H(|grad u|) = 0`` on a 1-D grid."""

    def __init__(self, discrepancy, witness, tolerance, parameters, checked,
                 frame, kinks):
        super().__init__("residual_check", discrepancy, witness, tolerance,
                         parameters, checked)
        self.frame = frame
        self.kinks = kinks

    def to_record(self):
        record = super().to_record()
        record["kinks"] = [p.to_record() for p in self.kinks]
        return record


def residual_check(space, u, u_next, H, dt, tol=None, sign=1, kink_tol=None):
    """Finite-difference residual of the Hamilton-Jacobi equation.

    Parameters
    ----------
    space: :obj:`hjconvexity.spaces.EuclideanP` (``dim=1``) or
        :obj:`hjconvexity.spaces.HalfLine`
    u, u_next: :obj:`ScalarField`
        The solution at ``t`` and ``t + dt`` on the same uniform grid.
    H: :obj:`hjconvexity.hamiltonian.Hamiltonian`
    dt: float
    tol: float, optional
        Residual tolerance, default ``10 (h/dt + dt)``.
    sign: +1 or -1
        ``+1`` for ``u_t + H = 0``, ``-1`` for ``u_t - H = 0``.
    kink_tol: float, optional
        One-sided slopes further apart than this mark a kink, default
        ``4 h`` plus a relative allowance.

    Returns
    -------
    report: :obj:`ResidualReport`
        ``frame`` holds ``x``, ``residual`` and ``kink`` per interior point.

    """
    if not (isinstance(space, HalfLine)
            or (isinstance(space, EuclideanP) and space.dim == 1)):
        raise TypeError("residual_check needs a one-dimensional grid space")
    if u.points != u_next.points:
        raise ValueError("u and u_next must share their sample points")
    h = float(space.h)
    tol = 10.0 * (h / dt + dt) if tol is None else tol
    kink_tol = 4.0 * h + 1e-9 if kink_tol is None else kink_tol
    x = u.coords.reshape(-1)
    a, b = u.values, u_next.values
    valid = u.valid & u_next.valid
    rows, kinks = [], []
    for i in range(1, len(x) - 1):
        if not (valid[i - 1] and valid[i] and valid[i + 1]):
            continue
        if abs(x[i] - x[i - 1] - h) > 1e-9 or abs(x[i + 1] - x[i] - h) > 1e-9:
            continue
        left = (a[i] - a[i - 1]) / h
        right = (a[i + 1] - a[i]) / h
        kink = abs(left - right) > kink_tol
        grad = max(abs(left), abs(right))
        residual = (b[i] - a[i]) / dt + sign * float(H(grad))
        rows.append((x[i], residual, kink))
        if kink:
            kinks.append(u.points[i])
    frame = pd.DataFrame(rows, columns=["x", "residual", "kink"])
    smooth = frame[~frame["kink"]] if len(frame) else frame
    if len(smooth):
        j = int(np.argmax(np.abs(smooth["residual"].to_numpy())))
        worst = float(abs(smooth["residual"].iloc[j]))
        witness = space.point(float(smooth["x"].iloc[j]))
    else:
        worst, witness = 0.0, None
    return ResidualReport(worst, witness, tol, {"dt": dt, "sign": sign, "h": h},
                          len(smooth), frame, kinks)


def alpha_family(space, u0, alpha, t, threads=1):
    """Solve with ``H(p) = p^alpha / alpha`` through ``L(v) = v^beta / beta``."""
    L = legendre(power_hamiltonian(alpha))
    return solve_inf(space, u0, L, t, threads=threads)


def alpha_speed(alpha, K):
    """``V_alpha = (alpha K / (alpha - 1))^(alpha - 1)``."""
    return (alpha * K / (alpha - 1.0)) ** (alpha - 1.0) if K > 0 else 0.0


class AlphaGapReport(BaseReport):
    """Convergence of the power family towards the eikonal solution."""

    def __init__(self, frame, parameters):
        super().__init__("alpha_gap", parameters=parameters)
        self.frame = frame

    @property
    def within_bounds(self):
        return bool(self.frame["within_bound"].all())

    @property
    def monotone(self):
        gaps = self.frame.sort_values("alpha", ascending=False)["gap"].to_numpy()
        return bool(np.all(np.diff(gaps) <= 1e-12))

    @property
    def passed(self):
        return self.within_bounds and self.monotone

    def to_record(self):
        return {
            "report": self.name,
            "verdict": self.verdict,
            "monotone": self.monotone,
            "within_bounds": self.within_bounds,
            "rows": self.frame,
            "parameters": self.parameters,
        }


def alpha_gap(space, u0, alphas, t, eps=None, threads=1):
    """Sup-norm gap between the power family and the eikonal solution.

    For each ``alpha`` the difference ``u_alpha - u`` must lie within
    ``[-K (V_alpha - 1) t - eps, (alpha - 1) t / alpha + eps]``.

    Returns
    -------
    df: ``pandas.DataFrame``
        Columns ``alpha``, ``speed``, ``gap``, ``lower``, ``upper``,
        ``within_bound``.
    md: :obj:`AlphaGapReport`

    """
    if u0.lipschitz is None:
        raise SolveError("alpha_gap needs a declared Lipschitz constant")
    K = u0.lipschitz
    eps = 1e-9 + K * float(space.h) if eps is None else eps
    eikonal = solve_eikonal(space, u0, t, sign="inf", threads=threads)
    rows = []
    for alpha in alphas:
        approx = alpha_family(space, u0, alpha, t, threads=threads)
        mask = approx.complete & eikonal.complete
        diff = (approx.values - eikonal.values)[mask]
        v_alpha = alpha_speed(alpha, K)
        upper = (alpha - 1.0) * t / alpha + eps
        lower = -K * max(v_alpha - 1.0, 0.0) * t - eps
        gap = float(np.max(np.abs(diff))) if len(diff) else 0.0
        inside = bool(len(diff) == 0 or (diff.max() <= upper and diff.min() >= lower))
        rows.append((alpha, v_alpha, gap, lower, upper, inside, int(mask.sum())))
    df = pd.DataFrame(
        rows,
        columns=["alpha", "speed", "gap", "lower", "upper", "within_bound", "points"],
    )
    return df, AlphaGapReport(df, {"t": t, "K": K, "eps": eps})


def lagrangian_for(hamiltonian, K=1.0) -> Optional[LagrangianTable]:
    """Conjugate used by the solvers; None selects the eikonal path."""
    if hamiltonian.tag == "linear":
        return None
    return legendre(hamiltonian, K=K)


def solve(space, u0, H=None, t=1.0, sense="inf", method="hopflax", threads=1):
    """Solve at time ``t`` on the path selected by ``method`` and ``H``.

    ``method="eikonal"`` or a linear ``H`` runs :func:`solve_eikonal`;
    otherwise ``H`` is conjugated with :func:`lagrangian_for` and handed to
    :func:`solve_inf` or :func:`solve_sup`.
    """
    if sense not in ("inf", "sup"):
        raise ValueError(f"sense must be 'inf' or 'sup', got {sense!r}")
    if method == "eikonal":
        L = None
    elif method == "hopflax":
        if H is None:
            raise SolveError("the Hopf-Lax path needs a Hamiltonian")
        K = 1.0 if u0.lipschitz is None else max(u0.lipschitz, 1.0)
        L = lagrangian_for(H, K=K)
    else:
        raise ValueError(f"method must be 'hopflax' or 'eikonal', got {method!r}")
    if L is None:
        return solve_eikonal(space, u0, t, sign=sense, threads=threads)
    solver = solve_inf if sense == "inf" else solve_sup
    return solver(space, u0, L, t, threads=threads)
