"""
Hamiltonians ``H: R_+ -> R`` and their Legendre conjugates.

A :class:`Hamiltonian` is an evaluator plus the structural flags the solvers
rely on: (H1) ``H`` is continuous with ``H(0) = 0``, (H2) ``H`` is
nondecreasing and convex, (H3) ``H`` is coercive, ``H(p)/p -> inf``.

:func:`legendre` returns the conjugate ``L(v) = sup_p (p v - H(p))`` as a
:class:`LagrangianTable`. Tagged Hamiltonians (power, quadratic, linear)
have closed form conjugates; anything else is tabulated on a p-grid and
refined around the grid maximiser with a golden-section search.
"""

import math
import warnings
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from hjconvexity.utils import TruncationError, UnboundedSpeedError

N_L = 4096

_CLOSED_FORMS = ("power", "quadratic", "linear")


class Hamiltonian:
    """A Hamiltonian ``H(p)`` on ``p >= 0``.

    Parameters
    ----------
    func: callable
        Vectorised evaluator ``p -> H(p)``.
    tag: string
        ``"power"``, ``"quadratic"``, ``"linear"``, ``"table"`` or
        ``"custom"``; the first three select a closed-form conjugate.
    alpha: float, optional
        Exponent of the power Hamiltonian ``p^alpha / alpha``.
    slope_limit: float, optional
        ``lim H(p)/p`` for Hamiltonians of linear growth. Beyond this speed
        the conjugate is ``+inf``.
    flags: dict, optional
        Declared ``{"H1": bool, "H2": bool, "H3": bool}``; missing flags are
        evaluated on a sampled grid by :func:`check_assumptions`.

    """

    def __init__(
        self,
        func: Callable,
        tag: str = "custom",
        alpha: Optional[float] = None,
        slope_limit: Optional[float] = None,
        flags: Optional[dict] = None,
    ):
        self.func = func
        self.tag = tag
        self.alpha = alpha
        self.slope_limit = slope_limit
        self._flags = dict(flags or {})

    def __call__(self, p):
        return np.asarray(self.func(np.asarray(p, dtype=float)), dtype=float)

    def __repr__(self) -> str:
        if self.tag == "power":
            return f"Hamiltonian(tag=power, alpha={self.alpha})"
        return f"Hamiltonian(tag={self.tag})"

    def _flag(self, name):
        if name not in self._flags:
            self._flags.update(check_assumptions(self))
        return self._flags[name]

    @property
    def satisfies_H1(self):
        return self._flag("H1")

    @property
    def satisfies_H2(self):
        return self._flag("H2")

    @property
    def satisfies_H3(self):
        return self._flag("H3")


def power_hamiltonian(alpha):
    """``H(p) = p^alpha / alpha`` for ``alpha > 1``."""
    alpha = float(alpha)
    if not alpha > 1:
        raise ValueError(f"alpha must be greater than 1, got {alpha}")
    return Hamiltonian(
        lambda p: np.power(p, alpha) / alpha,
        tag="power",
        alpha=alpha,
        flags={"H1": True, "H2": True, "H3": True},
    )


def quadratic_hamiltonian():
    """``H(p) = p^2 / 2``."""
    return Hamiltonian(
        lambda p: 0.5 * p * p,
        tag="quadratic",
        alpha=2.0,
        flags={"H1": True, "H2": True, "H3": True},
    )


def linear_hamiltonian():
    """``H(p) = p``, the eikonal Hamiltonian."""
    return Hamiltonian(
        lambda p: p * 1.0,
        tag="linear",
        slope_limit=1.0,
        flags={"H1": True, "H2": True, "H3": False},
    )


def table_hamiltonian(points, growth=None):
    """Piecewise-linear Hamiltonian through ``[[p, H(p)], ...]``.

    Values beyond the last point continue along the last segment. With
    ``growth="linear"`` the slope of that segment is the slope limit, so
    the conjugate is ``+inf`` past it.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("table Hamiltonian needs at least two [p, H(p)] points")
    order = np.argsort(pts[:, 0])
    ps, hs = pts[order, 0], pts[order, 1]
    if ps[0] != 0:
        raise ValueError("table Hamiltonian must start at p = 0")
    if np.any(np.diff(ps) <= 0):
        raise ValueError("table Hamiltonian p values must be distinct")
    last_slope = (hs[-1] - hs[-2]) / (ps[-1] - ps[-2])

    def func(p):
        inside = np.interp(p, ps, hs)
        return np.where(p > ps[-1], hs[-1] + last_slope * (p - ps[-1]), inside)

    slope_limit = None
    if growth == "linear":
        slope_limit = float(last_slope)
    elif growth is not None:
        raise ValueError(f"unknown growth {growth!r}; only 'linear' is supported")
    return Hamiltonian(func, tag="table", slope_limit=slope_limit,
                       flags={"H3": False})


def check_assumptions(H, p_max=100.0, n=2001):
    """Evaluate the (H1)-(H3) flags of ``H`` on a sampled grid.

    Returns
    -------
    flags: dict
        ``{"H1": bool, "H2": bool, "H3": bool}``

    Examples
    --------
    .. doctest::

        >>> hjconvexity.hamiltonian.check_assumptions(
        ...     hjconvexity.hamiltonian.linear_hamiltonian()
        ... )
        {'H1': True, 'H2': True, 'H3': False}

    """
    p = np.linspace(0.0, p_max, n)
    values = H(p)
    finite = bool(np.all(np.isfinite(values)))
    h1 = finite and abs(float(values[0])) <= 1e-12
    scale = max(1.0, float(np.max(np.abs(values)))) if finite else 1.0
    first = np.diff(values)
    second = np.diff(values, 2)
    h2 = finite and bool(np.all(first >= -1e-12 * scale)) and bool(
        np.all(second >= -1e-9 * scale)
    )
    if H.tag in ("power", "quadratic"):
        h3 = True
    elif H.tag in ("linear", "table") or not finite:
        h3 = False
    else:
        ratio_end = values[-1] / p[-1]
        ratio_mid = values[n // 2] / p[n // 2]
        h3 = bool(ratio_end > ratio_mid * (1 + 1e-3) and ratio_end > 1.0)
    return {"H1": bool(h1), "H2": bool(h2), "H3": bool(h3)}


class LagrangianTable:
    """The conjugate ``L(v) = sup_p (p v - H(p))`` as an extended-real map.

    Attributes
    ----------
    tag: string
        Closed-form tag or ``"numeric"``.
    v_max: float
        End of the tabulated range (``inf`` for closed forms).
    cell: float
        Table resolution ``h_L`` used for the speed margin.

    """

    def __init__(self, hamiltonian, tag, v_grid=None, values=None, p_max=None,
                 n_grid=N_L):
        self.hamiltonian = hamiltonian
        self.tag = tag
        self.p_max = p_max
        self.n_grid = n_grid
        self.v_grid = v_grid
        self.values = values
        self.slope_limit = hamiltonian.slope_limit
        if tag == "numeric":
            self.v_max = float(v_grid[-1])
            self.cell = self.v_max / (len(v_grid) - 1)
            if len(v_grid) > 1:
                self._tail = (values[-1] - values[-2]) / (v_grid[-1] - v_grid[-2])
            else:
                self._tail = 0.0
        else:
            self.v_max = math.inf
            self.cell = 1.0 / (n_grid - 1)

    def __repr__(self) -> str:
        return f"LagrangianTable(tag={self.tag}, v_max={self.v_max})"

    @property
    def alpha(self):
        return self.hamiltonian.alpha

    @property
    def beta(self):
        """Conjugate exponent ``alpha / (alpha - 1)`` of a power table."""
        if self.alpha is None:
            return None
        return self.alpha / (self.alpha - 1.0)

    @property
    def is_linear_growth(self):
        return self.slope_limit is not None

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        if np.any(v < 0):
            raise ValueError("L is defined on v >= 0")
        if self.tag == "linear":
            return np.where(v <= 1.0 + 1e-12, 0.0, np.inf)
        if self.tag == "quadratic":
            return 0.5 * v * v
        if self.tag == "power":
            beta = self.beta
            return np.power(v, beta) / beta
        out = np.interp(v, self.v_grid, self.values)
        beyond = v > self.v_max
        if np.any(beyond):
            if self.slope_limit is not None:
                extra = np.where(v > self.slope_limit + 1e-12, np.inf,
                                 self.values[-1] + self._tail * (v - self.v_max))
            else:
                extra = self.values[-1] + self._tail * (v - self.v_max)
            out = np.where(beyond, extra, out)
        return out


def _refine(H, v, lo, mid, hi, grid_value):
    # golden-section search for the maximiser of p v - H(p) in [lo, hi]
    try:
        res = minimize_scalar(
            lambda q: -(q * v - float(H(q))),
            bracket=(lo, mid, hi),
            method="golden",
            tol=1e-10,
        )
    except (ValueError, RuntimeError):
        return grid_value
    if lo <= res.x <= hi and np.isfinite(res.fun):
        return max(grid_value, -float(res.fun))
    return grid_value


def legendre(H, n_grid=N_L, p_max=None, v_max=None, K=1.0):
    """Legendre conjugate of a Hamiltonian.

    Parameters
    ----------
    H: :obj:`hjconvexity.hamiltonian.Hamiltonian`
        Must satisfy (H1).
    n_grid: int
        Number of nodes of the p-grid and of the v-grid, default 4096.
    p_max: float, optional
        End of the p-grid, default ``100 (1 + K)``.
    v_max: float, optional
        End of the tabulated v range. Defaults to the slope limit for
        linear-growth tables and otherwise to the largest slope of ``H``
        on the grid for which the maximiser stays interior.
    K: float
        Lipschitz constant the table will be used with; sets ``p_max``.

    Returns
    -------
    L: :obj:`hjconvexity.hamiltonian.LagrangianTable`

    Raises
    ------
    TruncationError
        If the sup is attained at ``p_max`` for a tabulated ``v > 0``.

    Examples
    --------
    .. doctest::

        >>> L = hjconvexity.hamiltonian.legendre(
        ...     hjconvexity.hamiltonian.linear_hamiltonian()
        ... )
        >>> L([0.5, 1.0, 2.0])
        array([ 0.,  0., inf])

    """
    if not H.satisfies_H1:
        raise ValueError("the Legendre transform requires H(0) = 0 (H1)")
    if H.tag in _CLOSED_FORMS:
        return LagrangianTable(H, H.tag, n_grid=n_grid)

    if p_max is None:
        p_max = 100.0 * (1.0 + float(K))
    p = np.linspace(0.0, p_max, n_grid)
    hp = H(p)
    dp = p[1] - p[0]
    if v_max is None:
        if H.slope_limit is not None:
            v_max = H.slope_limit
        else:
            v_max = float((hp[-2] - hp[-3]) / dp)
    if v_max <= 0:
        raise TruncationError(v=dp, p_max=p_max)

    v = np.linspace(0.0, v_max, n_grid)
    values = np.empty(n_grid)
    for start in range(0, n_grid, 256):
        block = v[start:start + 256]
        objective = np.outer(block, p) - hp[None, :]
        idx = np.argmax(objective, axis=1)
        for j, (vj, i) in enumerate(zip(block, idx)):
            grid_value = float(objective[j, i])
            if i == n_grid - 1 and vj > 0:
                if H.slope_limit is not None and vj >= H.slope_limit - 1e-12:
                    values[start + j] = grid_value
                    continue
                raise TruncationError(v=float(vj), p_max=p_max)
            if 0 < i < n_grid - 1:
                grid_value = _refine(H, vj, p[i - 1], p[i], p[i + 1], grid_value)
            values[start + j] = grid_value
    table = LagrangianTable(H, "numeric", v_grid=v, values=values,
                            p_max=p_max, n_grid=n_grid)
    second = np.diff(values, 2)
    if np.any(second < -1e-10 * max(1.0, float(np.max(np.abs(values))))):
        warnings.warn(
            "Tabulated Lagrangian is not convex on its grid; "
            "H may violate (H2).",
            UserWarning,
        )
    return table


def speed_bound(L, K):
    """Finite propagation speed ``V`` for Lipschitz constant ``K``.

    ``V = sup{v >= 0 : L(v)/v <= K}`` plus a margin of ten table cells.
    Minimisers of the Hopf-Lax infimum at ``(x, t)`` lie in ``B_{Vt}(x)``.

    Raises
    ------
    UnboundedSpeedError
        If ``L(v)/v <= K`` persists for every tested ``v``.

    Examples
    --------
    .. doctest::

        >>> L = hjconvexity.hamiltonian.legendre(
        ...     hjconvexity.hamiltonian.quadratic_hamiltonian()
        ... )
        >>> round(hjconvexity.hamiltonian.speed_bound(L, 1.0), 1)
        2.0

    """
    K = float(K)
    if K < 0:
        raise ValueError(f"Lipschitz constant must be nonnegative, got {K}")
    margin = 10.0 * L.cell
    if L.tag == "quadratic":
        return 2.0 * K + margin * max(1.0, 2.0 * K)
    if L.tag == "power":
        beta = L.beta
        exact = (beta * K) ** (1.0 / (beta - 1.0)) if K > 0 else 0.0
        return exact + margin * max(1.0, exact)
    if L.tag == "linear":
        return 1.0 + margin

    def excess(v):
        return float(L(v)) - K * v

    hi = max(L.cell, 1.0)
    limit = 1e9
    while excess(hi) <= 0:
        hi *= 2.0
        if hi > limit:
            raise UnboundedSpeedError(K, limit)
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return lo + margin


def fenchel_young_gap(H, L, p, v):
    """``L(v) + H(p) - p v``, nonnegative up to the table resolution."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    return L(v) + H(p) - p * v


def recover_hamiltonian(L, p, v_max=None, n=N_L):
    """``sup_v (p v - L(v))`` on a v-grid; equals ``H(p)`` for convex H."""
    if v_max is None:
        v_max = L.v_max if math.isfinite(L.v_max) else 10.0 * (1.0 + float(np.max(p)))
    v = np.linspace(0.0, v_max, n)
    lv = L(v)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    finite = np.isfinite(lv)
    return np.max(np.outer(p, v[finite]) - lv[finite][None, :], axis=1)


def hamiltonian_from_config(config):
    """Build a Hamiltonian from a ``[hamiltonian]`` table.

    Raises
    ------
    TypeError
        If ``kind`` is unknown.

    """
    kind = config.get("kind")
    if kind == "power":
        if "alpha" not in config:
            raise ValueError("power Hamiltonian needs 'alpha'")
        return power_hamiltonian(config["alpha"])
    elif kind == "quadratic":
        return quadratic_hamiltonian()
    elif kind == "linear":
        return linear_hamiltonian()
    elif kind == "table":
        if "points" not in config:
            raise ValueError("table Hamiltonian needs 'points'")
        return table_hamiltonian(config["points"], growth=config.get("growth"))
    else:
        raise TypeError(
            f"Unrecognized Hamiltonian kind: {kind!r}; expected one of power, "
            "quadratic, linear, table"
        )
