"""
Busemann conditions for the catalog spaces.

The three point condition asks ``2 d(z, z') <= d(y, y')`` for every
``z`` in ``M(x, y)`` and ``z'`` in ``M(x, y')``; the four point condition
asks ``2 d(z, z') <= d(x, x') + d(y, y')`` for ``z`` in ``M(x, y)`` and
``z'`` in ``M(x', y')``. A space is a uniform Busemann NPC space with
radius ``delta`` when the three point condition holds for all triples inside
any ball of radius ``delta``.

Margins are ``rhs - 2 d(z, z')``; they are exact fractions on the lattice.
"""

import math
import time

import numpy as np

from hjconvexity.presets.witnesses import busemann_triples, literature_notes
from hjconvexity.spaces import Lattice2
from hjconvexity.utils import BaseReport, chunks, parallel_map


class StructureReport(BaseReport):
    """Verdict of a Busemann check.

    Attributes
    ----------
    condition: string
        ``"busemann3"``, ``"busemann4"`` or ``"uniform_npc"``.
    margin: float or Fraction
        Smallest ``rhs - 2 d(z, z')`` found.
    witness: dict
        The tuple and the midpoints attaining ``margin``.
    tuples_tested: int
    delta: float or None
        Ball radius of the uniform NPC check.
    unique_midpoints: bool
        True when every midpoint set met was a singleton.

    """

    def __init__(self, condition, margin, witness, tuples_tested, tau,
                 unique_midpoints, delta=None, parameters=None, wall_time=0.0):
        super().__init__(condition, parameters=parameters, wall_time=wall_time)
        self.condition = condition
        self.margin = margin
        self.witness = witness
        self.tuples_tested = int(tuples_tested)
        self.tau = tau
        self.unique_midpoints = bool(unique_midpoints)
        self.delta = delta
        self.named = []

    @property
    def passed(self):
        return self.margin >= -self.tau

    def to_record(self):
        return {
            "report": "StructureReport",
            "condition": self.condition,
            "verdict": self.verdict,
            "margin": self.margin,
            "tau": self.tau,
            "delta": self.delta,
            "witness": self.witness,
            "tuples_tested": self.tuples_tested,
            "named": self.named,
            "unique_midpoints": self.unique_midpoints,
            "parameters": self.parameters,
            "notes": self.notes,
            "wall_time": self.wall_time,
        }


def _default_tau(space):
    return 0 if isinstance(space, Lattice2) else 1e-12


def _pool(space, points, radius):
    if points is not None:
        return list(points)
    return space.ball_sample(space.origin, radius)


def _evaluate(space, tuples, four, threads):
    # per tuple: (slack, z, z', singleton midpoint sets)
    def block(rows):
        out = []
        for r in rows:
            x, x2, y, y2 = tuples[r]
            left = space.midpoints(x, y)
            right = space.midpoints(x2, y2)
            rhs = space.distance(y, y2)
            if four:
                rhs = rhs + space.distance(x, x2)
            best = None
            for z in left:
                for z2 in right:
                    slack = rhs - 2 * space.distance(z, z2)
                    if best is None or slack < best[0]:
                        best = (slack, z, z2)
            out.append(best + (len(left) == 1 and len(right) == 1,))
        return out

    parts = parallel_map(block, chunks(len(tuples), max(1, threads) * 4), threads)
    return [row for part in parts for row in part]


def _report(condition, space, tuples, results, tau, four, delta, parameters, start,
            named=0):
    margin, witness = math.inf, None
    for (x, x2, y, y2), (slack, z, z2, _) in zip(tuples, results):
        if slack < margin:
            margin = slack
            witness = {"x": x, "y": y, "y2": y2, "z": z, "z2": z2}
            if four:
                witness["x2"] = x2
    if not results:
        margin = 0
    report = StructureReport(
        condition, margin, witness, len(tuples), tau,
        all(r[3] for r in results), delta, parameters, time.perf_counter() - start,
    )
    for (x, x2, y, y2), (slack, z, z2, _) in zip(tuples[:named], results):
        report.named.append(
            {"x": x, "y": y, "y2": y2, "z": z, "z2": z2, "margin": slack}
        )
    if named:
        report.notes.extend(literature_notes(space))
    return report


def _random_triples(pool, budget, rng):
    picks = rng.integers(0, len(pool), size=(budget, 3))
    return [(pool[a], pool[b], pool[c]) for a, b, c in picks.tolist()]


def check_busemann3(space, sample_budget=2000, seed=0, points=None, tau=None,
                    radius=2.0, threads=1):
    """Three point Busemann condition over sampled triples.

    Triples ``(x, y, y')`` are the named witnesses of the space followed
    by ``sample_budget`` seeded random triples from ``points`` (default a
    ball sample of ``radius`` around the origin).

    Returns
    -------
    report: :obj:`StructureReport`

    Examples
    --------
    .. doctest::

        >>> lattice = hjconvexity.spaces.Lattice2(h="1/2")
        >>> report = hjconvexity.structure.check_busemann3(lattice, 50)
        >>> report.verdict, report.named[-1]["margin"]
        ('FAIL', Fraction(-4, 1))

    """
    start = time.perf_counter()
    tau = _default_tau(space) if tau is None else tau
    pool = _pool(space, points, radius)
    rng = np.random.default_rng(seed)
    named = busemann_triples(space)
    triples = named + _random_triples(pool, sample_budget, rng)
    tuples = [(x, x, y, y2) for x, y, y2 in triples]
    results = _evaluate(space, tuples, False, threads)
    return _report("busemann3", space, tuples, results, tau, False, None,
                   {"sample_budget": sample_budget, "seed": seed, "pool": len(pool)},
                   start, len(named))


def check_busemann4(space, sample_budget=2000, seed=0, points=None, tau=None,
                    radius=2.0, threads=1):
    """Four point Busemann condition over sampled quadruples.

    The quadruples contain every triple of :func:`check_busemann3` with
    the same seed as ``(x, x, y, y')`` followed by ``sample_budget`` random
    quadruples.
    """
    start = time.perf_counter()
    tau = _default_tau(space) if tau is None else tau
    pool = _pool(space, points, radius)
    rng = np.random.default_rng(seed)
    named = busemann_triples(space)
    triples = named + _random_triples(pool, sample_budget, rng)
    tuples = [(x, x, y, y2) for x, y, y2 in triples]
    picks = rng.integers(0, len(pool), size=(sample_budget, 4))
    tuples += [(pool[a], pool[b], pool[c], pool[e]) for a, b, c, e in picks.tolist()]
    results = _evaluate(space, tuples, True, threads)
    return _report("busemann4", space, tuples, results, tau, True, None,
                   {"sample_budget": sample_budget, "seed": seed, "pool": len(pool)},
                   start, len(named))


class EquivalenceReport(BaseReport):
    """Agreement of the three and four point verdicts on one point set."""

    def __init__(self, three, four):
        super().__init__(
            "equivalence_3_4",
            parameters=dict(three.parameters),
            wall_time=three.wall_time + four.wall_time,
        )
        self.three = three
        self.four = four

    @property
    def passed(self):
        return self.three.passed == self.four.passed

    @property
    def witness(self):
        if self.passed:
            return None
        return self.three.witness if not self.three.passed else self.four.witness

    def to_record(self):
        return {
            "report": "EquivalenceReport",
            "verdict": self.verdict,
            "busemann3": self.three.verdict,
            "busemann4": self.four.verdict,
            "margin3": self.three.margin,
            "margin4": self.four.margin,
            "witness": self.witness,
            "parameters": self.parameters,
        }


def check_equivalence_3_4(space, sample_budget=2000, seed=0, points=None,
                          radius=2.0, threads=1):
    """Run both Busemann checks on the same points and compare verdicts."""
    pool = _pool(space, points, radius)
    three = check_busemann3(space, sample_budget, seed, pool, threads=threads)
    four = check_busemann4(space, sample_budget, seed, pool, threads=threads)
    return EquivalenceReport(three, four)


def _fits(space, center, points, delta):
    return all(float(space.distance(center, p)) <= delta + 1e-12 for p in points)


def check_uniform_npc(space, delta, sample_budget=2000, seed=0, centers=None,
                      tau=None, n_centers=16, radius=2.0, threads=1):
    """Three point condition on triples inside balls ``B_delta(p)``.

    Centers are the origin plus ``n_centers - 1`` seeded picks from
    ``centers`` (default a ball sample of ``radius``); each center gets an
    equal share of ``sample_budget`` random triples from
    ``ball_sample(p, delta)``. Named witnesses are added, centred at their
    first point, whenever they fit in the ball.

    Examples
    --------
    .. doctest::

        >>> lattice = hjconvexity.spaces.Lattice2(h="1/8")
        >>> hjconvexity.structure.check_uniform_npc(lattice, 1 / 3, 200).verdict
        'PASS'

    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    start = time.perf_counter()
    tau = _default_tau(space) if tau is None else tau
    pool = _pool(space, centers, radius)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(pool), size=min(n_centers - 1, len(pool)), replace=False)
    chosen = [space.origin] + [pool[k] for k in sorted(picks.tolist())]
    share = max(1, sample_budget // len(chosen))
    tuples = [
        (x, x, y, y2) for x, y, y2 in busemann_triples(space)
        if _fits(space, x, (y, y2), delta)
    ]
    named = len(tuples)
    for p in chosen:
        ball = space.ball_sample(p, delta)
        tuples += [(x, x, y, y2) for x, y, y2 in _random_triples(ball, share, rng)]
    results = _evaluate(space, tuples, False, threads)
    return _report("uniform_npc", space, tuples, results, tau, False, delta,
                   {"sample_budget": sample_budget, "seed": seed,
                    "centers": len(chosen)}, start, named)


def search_npc_delta(space, lo, hi, sample_budget=500, seed=0, iterations=10,
                     threads=1):
    """Bisect for the largest ``delta`` in ``[lo, hi]`` passing the uniform
    NPC check.

    Returns
    -------
    delta: float or None
        Largest passing radius found, None if ``lo`` fails.
    report: :obj:`StructureReport`
        The check at ``delta``, or the failing check at ``lo``.

    """
    if not 0 < lo < hi:
        raise ValueError(f"need 0 < lo < hi, got lo={lo}, hi={hi}")
    top = check_uniform_npc(space, hi, sample_budget, seed, threads=threads)
    if top.passed:
        return hi, top
    best = check_uniform_npc(space, lo, sample_budget, seed, threads=threads)
    if not best.passed:
        return None, best
    good, bad = lo, hi
    for _ in range(iterations):
        mid = 0.5 * (good + bad)
        report = check_uniform_npc(space, mid, sample_budget, seed, threads=threads)
        if report.passed:
            good, best = mid, report
        else:
            bad = mid
    return good, best
