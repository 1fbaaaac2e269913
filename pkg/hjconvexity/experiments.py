"""
Registry of golden experiments.

Each experiment is an :class:`ExperimentSpec` with a runner. Running it
solves and checks the fields it declares, compares the results against
:class:`Golden` values and returns an :class:`ExperimentReport`. Every
golden carries a provenance tag:

- ``published``: a value or verdict quoted in the literature,
- ``derived``: computed independently (by hand or by exhaustive
  enumeration) for this implementation,
- ``trivial``: a sanity value.

Experiments are deterministic given their seed and never touch the
network.
"""

import logging
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from hjconvexity.config import build_initial, build_space
from hjconvexity.convexity import (
    check_infty_subharmonious,
    check_pointwise,
    check_weak_geodesic,
    geodesic_interior,
    growth_check,
    lattice_rigidity_check,
    lipschitz_estimate,
    midpoint_lipschitz_check,
)
from hjconvexity.hamiltonian import hamiltonian_from_config, linear_hamiltonian
from hjconvexity.hopflax import (
    alpha_gap,
    dpp_check,
    lagrangian_for,
    residual_check,
    solve,
)
from hjconvexity.spaces import (
    Cylinder,
    EuclideanP,
    HalfLine,
    Lattice2,
    cross_coordinates,
    star_tree,
)
from hjconvexity.structure import (
    check_busemann3,
    check_equivalence_3_4,
    check_uniform_npc,
)
from hjconvexity.utils import BaseReport, UnknownExperimentError, jsonable

logger = logging.getLogger(__name__)

PUBLISHED = "published"
DERIVED = "derived"
TRIVIAL = "trivial"

RELATIONS = ("eq", "le", "lt", "ge", "is")


class Golden:
    """An expected value and the value an experiment produced.

    Parameters
    ----------
    name: string
    value: object
        Computed value.
    expected: object
        Expected value or bound.
    tolerance: float
        Allowed deviation for ``eq``, ``le`` and ``ge``; 0 for exact
        dyadic lattice values.
    provenance: string
        ``"published"``, ``"derived"`` or ``"trivial"``.
    relation: string
        ``"eq"`` (``|value - expected| <= tolerance``), ``"le"``, ``"lt"``,
        ``"ge"`` or ``"is"`` (plain equality, for verdicts and sets).
    note: string, optional

    """

    def __init__(self, name, value, expected, tolerance=0.0, provenance=DERIVED,
                 relation="eq", note=None):
        if relation not in RELATIONS:
            raise ValueError(f"unknown relation {relation!r}; expected {RELATIONS}")
        if provenance not in (PUBLISHED, DERIVED, TRIVIAL):
            raise ValueError(f"unknown provenance {provenance!r}")
        self.name = name
        self.value = value
        self.expected = expected
        self.tolerance = tolerance
        self.provenance = provenance
        self.relation = relation
        self.note = note

    @property
    def matches(self):
        v, e, tol = self.value, self.expected, self.tolerance
        if self.relation == "is":
            return v == e
        if v is None:
            return False
        if self.relation == "eq":
            return abs(v - e) <= tol
        elif self.relation == "le":
            return v <= e + tol
        elif self.relation == "lt":
            return v < e
        else:
            return v >= e - tol

    def to_record(self):
        return {
            "name": self.name,
            "value": self.value,
            "expected": self.expected,
            "relation": self.relation,
            "tolerance": self.tolerance,
            "provenance": self.provenance,
            "match": self.matches,
            "note": self.note,
        }

    def __repr__(self) -> str:
        return f"Golden(name={self.name!r}, match={self.matches})"


class ExperimentReport(BaseReport):
    """Goldens, sub-reports and tables of one experiment run.

    Attributes
    ----------
    goldens: list of :obj:`Golden`
    reports: dict
        Solve and check reports keyed by a short label.
    tables: dict
        ``pandas.DataFrame`` objects written as CSV (field slices).

    """

    def __init__(self, name, seed):
        super().__init__(name, parameters={"seed": seed})
        self.seed = seed
        self.goldens = []
        self.reports = {}
        self.tables = {}

    def golden(self, name, value, expected, **kwargs):
        g = Golden(name, value, expected, **kwargs)
        self.goldens.append(g)
        logger.debug("%s: %s (expected %s %s)", name, value, g.relation, expected)
        return g

    def add(self, label, report):
        self.reports[label] = report
        return report

    @property
    def passed(self):
        return all(g.matches for g in self.goldens)

    def diff_table(self, mismatches_only=False):
        """Goldens as a DataFrame; optionally only the mismatches."""
        df = pd.DataFrame(
            [jsonable(g.to_record()) for g in self.goldens],
            columns=["name", "value", "expected", "relation", "tolerance",
                     "provenance", "match", "note"],
        )
        if mismatches_only:
            df = df[~df["match"]]
        return df

    def to_record(self):
        return {
            "experiment": self.name,
            "verdict": self.verdict,
            "seed": self.seed,
            "goldens": self.goldens,
            "reports": {k: r.to_record() for k, r in self.reports.items()},
            "notes": self.notes,
            "wall_time": self.wall_time,
        }

    def write(self, out_dir, fmt="both"):
        """Write ``<name>.json`` and the CSV tables to ``out_dir``.

        Returns
        -------
        paths: list of string

        """
        if fmt not in ("json", "csv", "both"):
            raise ValueError(f"format must be json, csv or both, got {fmt!r}")
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        if fmt in ("json", "both"):
            path = os.path.join(out_dir, f"{self.name}.json")
            self.to_json(path)
            paths.append(path)
        if fmt in ("csv", "both"):
            path = os.path.join(out_dir, f"{self.name}_goldens.csv")
            self.diff_table().to_csv(path, index=False)
            paths.append(path)
            for label, table in self.tables.items():
                path = os.path.join(out_dir, f"{self.name}_{label}.csv")
                table.to_csv(path, index=False)
                paths.append(path)
        return paths


@dataclass(frozen=True)
class ExperimentSpec:
    """A registered experiment.

    The tables follow the layout of a TOML run configuration, so an
    experiment can be replayed with the ``solve`` command.
    """

    name: str
    description: str
    runner: Callable
    space: Optional[dict] = None
    initial: Optional[dict] = None
    hamiltonian: Optional[dict] = None
    times: Tuple[float, ...] = ()
    sense: str = "inf"
    method: str = "hopflax"
    checks: Tuple[str, ...] = ()
    seed: int = 0
    tags: dict = field(default_factory=dict)

    def config(self):
        """The spec as a run configuration dictionary."""
        config = {}
        if self.space is not None:
            config["space"] = dict(self.space)
        if self.initial is not None:
            config["initial"] = dict(self.initial)
        if self.hamiltonian is not None:
            config["hamiltonian"] = dict(self.hamiltonian)
        if self.times:
            config["times"] = {
                "values": list(self.times), "sense": self.sense, "method": self.method,
            }
        return config

    def setup(self):
        """``(space, u0)`` built exactly as the ``solve`` command builds them."""
        config = self.config()
        space, center, radius = build_space(config)
        return space, build_initial(config, space, center, radius)

    def H(self):
        if self.hamiltonian is None:
            return linear_hamiltonian()
        return hamiltonian_from_config(self.hamiltonian)


registry = {}


def register(spec):
    if spec.name in registry:
        raise ValueError(f"experiment {spec.name!r} is already registered")
    registry[spec.name] = spec
    return spec


def _solve(spec, space, u0, t, threads):
    return solve(space, u0, spec.H(), t, sense=spec.sense, method=spec.method,
                 threads=threads)


def _value(field, point):
    return field.value_at(point)


# ---------------------------------------------------------------- runners


def _halfline_nonpreservation(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    h = float(space.h)
    weak0 = report.add(
        "weak_t0", check_weak_geodesic(space, u0, 3000, seed=seed, threads=threads)
    )
    report.golden("weak convexity at t=0", weak0.verdict, "PASS",
                  provenance=PUBLISHED, relation="is")
    solved = {}
    for t in spec.times:
        sol = report.add(f"solve_t{t:g}", _solve(spec, space, u0, t, threads))
        solved[t] = sol
        report.tables[f"u_t{t:g}"] = sol.to_frame()
        f = sol.field
        x = f.coords.reshape(-1)
        mask = f.valid & (x <= 10.0 + 1e-9)
        error = float(np.max(np.abs(f.values[mask] - np.minimum(t - x[mask], 0.0))))
        report.golden(f"max |u - min(t - x, 0)| on [0, 10] at t={t:g}", error, h,
                      provenance=PUBLISHED, relation="le")
        weak = report.add(
            f"weak_t{t:g}",
            check_weak_geodesic(space, f, 3000, seed=seed, threads=threads),
        )
        report.golden(f"weak convexity margin at t={t:g}", weak.margin,
                      -min(h, 0.1), provenance=PUBLISHED, relation="le")
        w = weak.witness
        straddles = min(w["x"].x, w["y"].x) < t < max(w["x"].x, w["y"].x)
        report.golden(f"witness straddles x=t at t={t:g}", straddles, True,
                      provenance=DERIVED, relation="is")
    dpp = report.add("dpp", dpp_check(space, u0, None, 0.5, 1.0, sense="sup",
                                      threads=threads))
    report.golden("DPP discrepancy", dpp.discrepancy, 2.0 * h, provenance=DERIVED,
                  relation="le")
    later = _solve(spec, space, u0, 1.1, threads)
    residual = report.add(
        "residual",
        residual_check(space, solved[1.0].field, later.field, linear_hamiltonian(),
                       0.1, sign=-1),
    )
    report.golden("residual off kinks", residual.discrepancy, residual.tolerance,
                  provenance=DERIVED, relation="le")
    return report


def _lattice_nonpreservation(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    t = spec.times[0]
    sol = report.add("solve", _solve(spec, space, u0, t, threads))
    report.tables["u"] = sol.to_frame()
    f = sol.field
    x, y = space.point(5, 4), space.point(4, 12)
    z1, z2, z3 = space.point(4, "15/2"), space.point("9/2", 8), space.point(5, "17/2")
    ux, uy = _value(f, x), _value(f, y)
    report.golden("u((5,4), 4)", ux, 0.0, provenance=PUBLISHED)
    report.golden("u((4,12), 4) bound", uy, 12.0, provenance=PUBLISHED,
                  relation="le")
    report.golden("u((4,12), 4)", uy, 12.0, provenance=DERIVED)
    report.golden(
        "u((4,15/2), 4)", _value(f, z1), 21 / 2, provenance=DERIVED,
        note="the literature quotes 3k - 3/4 = 45/4; the ball of radius 4 "
             "reaches (1/2, 7) where u0 = 21/2",
    )
    report.notes.append(
        "u((4,15/2), 4) = 21/2 while the published value is 45/4; the "
        "published inequality < -2k still holds"
    )
    report.golden("u((9/2,8), 4)", _value(f, z2), 12.0, provenance=PUBLISHED)
    report.golden("u((5,17/2), 4)", _value(f, z3), 20.0, provenance=PUBLISHED)
    mids = space.midpoints(x, y)
    report.golden("midpoints of (5,4) and (4,12)",
                  sorted(m.label() for m in mids),
                  sorted(p.label() for p in (z1, z2, z3)),
                  provenance=DERIVED, relation="is")
    worst = max(ux + uy - 2.0 * _value(f, z) for z in mids)
    report.golden("max over midpoints of u(x) + u(y) - 2 u(z)", worst, -8.0,
                  provenance=PUBLISHED, relation="lt")
    dpp = report.add("dpp", dpp_check(space, u0, None, t / 2, t, threads=threads))
    report.golden("DPP discrepancy", dpp.discrepancy, 0.0, provenance=DERIVED,
                  relation="le")
    return report


def _cylinder_preservation(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    weak0 = report.add(
        "weak_t0", check_weak_geodesic(space, u0, 2000, seed=seed, threads=threads)
    )
    report.golden("weak convexity at t=0", weak0.verdict, "PASS",
                  provenance=TRIVIAL, relation="is")
    heights = u0.coords[:, 1]
    for t in spec.times:
        sol = report.add(f"solve_t{t:g}", _solve(spec, space, u0, t, threads))
        report.tables[f"u_t{t:g}"] = sol.to_frame()
        f = sol.field
        error = float(np.max(np.abs((f.values - (heights - t))[f.valid])))
        report.golden(f"max |u - (height - t)| at t={t:g}", error, 1e-9,
                      provenance=PUBLISHED, relation="le")
        weak = report.add(
            f"weak_t{t:g}",
            check_weak_geodesic(space, f, 2000, seed=seed, threads=threads),
        )
        report.golden(f"weak convexity at t={t:g}", weak.verdict, "PASS",
                      provenance=PUBLISHED, relation="is")
    mids = space.midpoints(space.point(0, 0), space.point(math.pi, 0))
    report.golden(
        "midpoints of (0,0) and (pi,0)",
        [(round(m.theta, 9), round(m.height, 9)) for m in mids],
        [(round(math.pi / 2, 9), 0.0), (round(3 * math.pi / 2, 9), 0.0)],
        provenance=PUBLISHED, relation="is",
    )
    return report


def _catalog():
    return {
        "euclidean p=1.5": EuclideanP(dim=2, p=1.5, h=0.25),
        "euclidean p=2": EuclideanP(dim=2, p=2.0, h=0.25),
        "euclidean p=3": EuclideanP(dim=2, p=3.0, h=0.25),
        "3-star tree": star_tree(3, 2.0, h=0.125),
        "half-line": HalfLine(h=0.25),
        "lattice": Lattice2(h="1/8"),
        "cylinder": Cylinder(h=0.25),
    }


def _busemann_catalog(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    budget = spec.tags.get("sample_budget", 300)
    for label, space in _catalog().items():
        busemann = not isinstance(space, (Lattice2, Cylinder))
        b3 = report.add(f"busemann3 {label}",
                        check_busemann3(space, budget, seed, threads=threads))
        report.golden(f"busemann3 on {label}", b3.verdict,
                      "PASS" if busemann else "FAIL", provenance=PUBLISHED,
                      relation="is")
        eq = report.add(f"equivalence {label}",
                        check_equivalence_3_4(space, budget, seed, threads=threads))
        report.golden(f"busemann3 and busemann4 agree on {label}", eq.verdict,
                      "PASS", provenance=PUBLISHED, relation="is")
        if busemann:
            lip = report.add(
                f"midpoint lipschitz {label}",
                midpoint_lipschitz_check(space, budget=spec.tags.get("quadruples",
                                                                     10**4),
                                         seed=seed),
            )
            report.golden(f"midpoint map is 1/2-Lipschitz on {label}", lip.verdict,
                          "PASS", provenance=DERIVED, relation="is")
        if isinstance(space, Lattice2):
            report.golden("lattice witness margin, k=2", b3.named[-1]["margin"],
                          Fraction(-4), provenance=PUBLISHED)
            report.notes.extend(b3.notes)
            npc = report.add("uniform npc lattice",
                             check_uniform_npc(space, 1 / 3, budget, seed,
                                               threads=threads))
            report.golden("uniform NPC on the lattice at delta=1/3", npc.verdict,
                          "PASS", provenance=PUBLISHED, relation="is")
        if isinstance(space, Cylinder):
            npc = report.add("uniform npc cylinder",
                             check_uniform_npc(space, math.pi / 4, budget, seed,
                                               threads=threads))
            report.golden("uniform NPC on the cylinder at delta=pi/4", npc.verdict,
                          "PASS", provenance=DERIVED, relation="is",
                          note="the published radius pi/2 admits antipodal pairs "
                               "on the closed ball")
            report.golden("|uniform NPC margin| on the cylinder", abs(npc.margin),
                          1e-12, provenance=DERIVED, relation="le")
    return report


def _lattice_rigidity(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    rigidity = report.add(
        "rigidity",
        lattice_rigidity_check(trials=spec.tags.get("trials", 10**5), seed=seed),
    )
    report.golden("limit inequalities force u = 0", rigidity.unique_solution, True,
                  provenance=PUBLISHED, relation="is")
    report.golden("nonconstant convex fields found", rigidity.nonconstant, 0,
                  provenance=PUBLISHED)
    report.golden("three inequalities alone are bounded", rigidity.cone_is_bounded,
                  False, provenance=DERIVED, relation="is")
    report.notes.extend(rigidity.notes)
    return report


def _npc_preservation_tree(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    h, K = float(space.h), u0.lipschitz
    H = spec.H()
    pairs = len(u0) * (len(u0) - 1) // 2
    solved = {}
    for t in spec.times:
        sol = report.add(f"solve_t{t:g}", _solve(spec, space, u0, t, threads))
        solved[t] = sol
        report.tables[f"u_t{t:g}"] = sol.to_frame()
        f = sol.field
        weak = report.add(f"weak_t{t:g}",
                          check_weak_geodesic(space, f, pairs, seed=seed,
                                              threads=threads))
        report.golden(f"weak convexity margin at t={t:g}", weak.margin,
                      -5.0 * K * h, provenance=DERIVED, relation="ge")
        report.golden(f"Lipschitz constant at t={t:g}",
                      lipschitz_estimate(space, f, pairs, seed), K + 5.0 * h,
                      provenance=DERIVED, relation="le")
        growth = report.add(f"growth_t{t:g}", growth_check(space, f, t, K, H,
                                                           seed=seed))
        report.golden(f"growth bound at t={t:g}", growth.verdict, "PASS",
                      provenance=DERIVED, relation="is")
    leaf = space.point(0, 2.0)
    closing = solved[1.0]
    report.golden("u(leaf, 1)", closing.value_at(leaf), 1.5, tolerance=1e-9,
                  provenance=DERIVED)
    report.golden("u(center, 1)", closing.value_at(space.origin), 0.0,
                  tolerance=1e-9, provenance=DERIVED)
    L = lagrangian_for(H)
    dpp = report.add("dpp", dpp_check(space, u0, L, 0.5, 1.0, threads=threads))
    report.golden("DPP discrepancy", dpp.discrepancy, 2.0 * h, provenance=DERIVED,
                  relation="le")
    return report


def _subharmonic_preservation(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    norms = np.abs(u0.coords).sum(axis=1)
    for t in spec.times:
        sol = report.add(f"solve_t{t:g}", _solve(spec, space, u0, t, threads))
        report.tables[f"u_t{t:g}"] = sol.to_frame()
        f = sol.field
        report.golden(f"u = ||x|| + t at t={t:g}",
                      float(np.max(np.abs((f.values - norms - t)[f.valid]))), 0.0,
                      provenance=DERIVED)
        sub = report.add(
            f"subharmonious_t{t:g}",
            check_infty_subharmonious(space, f, delta=1.0, r_grid=[0.5, 1.0],
                                      uniform=True, threads=threads),
        )
        report.golden(f"uniform infinity-subharmonious margin at t={t:g}",
                      sub.margin, 0.0, provenance=PUBLISHED, relation="ge")
        report.golden(f"balls tested at t={t:g}", sub.pairs_tested, 1,
                      provenance=TRIVIAL, relation="ge")
    return report


def _cross_pointwise_loss(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    h = float(space.h)
    t = spec.times[0]
    before = report.add("pointwise_t0", check_pointwise(space, u0, threads=threads))
    report.golden("pointwise convexity of u0", before.verdict, "PASS",
                  provenance=PUBLISHED, relation="is")
    sub = report.add("subharmonious_t0",
                     check_infty_subharmonious(space, u0, threads=threads))
    report.golden("u0 is not infinity-subharmonious", sub.verdict, "FAIL",
                  provenance=PUBLISHED, relation="is")
    report.golden("infinity-subharmonious margin of u0",
                  sub.margin, -max(sub.parameters["r_grid"]), tolerance=1e-12,
                  provenance=DERIVED)
    sol = report.add("solve", _solve(spec, space, u0, t, threads))
    report.tables["u"] = sol.to_frame()
    f = sol.field
    closed = np.array([min(t - cross_coordinates(p)[0], 0.0) for p in f.points])
    report.golden("max |u - min(t - x1, 0)|",
                  float(np.max(np.abs(f.values - closed))), 0.0, tolerance=1e-12,
                  provenance=PUBLISHED)
    after = report.add("pointwise_t", check_pointwise(space, f, threads=threads))
    report.golden("pointwise convexity after the flow", after.verdict, "FAIL",
                  provenance=PUBLISHED, relation="is")
    report.golden("pointwise margin", after.margin, -h, tolerance=1e-12,
                  provenance=DERIVED)
    report.golden("pointwise witness", cross_coordinates(after.witness["z"]),
                  (t, 0.0), provenance=PUBLISHED, relation="is")
    r_grid = [h, 2 * h, 4 * h]
    for planar in ((t, 0.0), (0.0, 0.0), (0.0, 2.0)):
        z = space.planar(*planar)
        report.golden(f"{planar} is geodesic interior",
                      geodesic_interior(space, z, r_grid), True,
                      provenance=PUBLISHED, relation="is")
    return report


def _alpha_convergence(spec, seed, threads):
    report = ExperimentReport(spec.name, seed)
    space, u0 = spec.setup()
    h = float(space.h)
    alphas = spec.tags.get("alphas", (2.0, 1.5, 1.2, 1.05))
    df, md = alpha_gap(space, u0, alphas, spec.times[0], threads=threads)
    report.add("alpha_gap", md)
    report.tables["alpha_gap"] = df
    report.golden("gaps within the two-sided bound", md.within_bounds, True,
                  provenance=PUBLISHED, relation="is")
    report.golden("gaps decrease with alpha", md.monotone, True,
                  provenance=PUBLISHED, relation="is")
    final = float(df.loc[df["alpha"] == min(alphas), "gap"].iloc[0])
    report.golden(f"gap at alpha={min(alphas):g}", final, 0.06 + 2.0 * h,
                  provenance=PUBLISHED, relation="le")
    return report


register(ExperimentSpec(
    name="halfline-nonpreservation",
    description="u_t - |u_x| = 0 on the half-line from u0 = -x destroys convexity",
    runner=_halfline_nonpreservation,
    space={"kind": "halfline", "h": 0.01, "center": [6.0], "radius": 6.0},
    initial={"preset": "neg_x"},
    hamiltonian={"kind": "linear"},
    times=(0.5, 1.0),
    sense="sup",
    method="eikonal",
    checks=("weak-geodesic",),
))

register(ExperimentSpec(
    name="lattice-nonpreservation",
    description="the eikonal flow breaks 1-weak convexity on the lattice",
    runner=_lattice_nonpreservation,
    space={"kind": "lattice", "h": "1/4", "center": [0, 0], "radius": 20},
    initial={"preset": "quadrant_product"},
    hamiltonian={"kind": "linear"},
    times=(4.0,),
    sense="inf",
    method="eikonal",
))

register(ExperimentSpec(
    name="cylinder-preservation",
    description="u0 = height on the flat cylinder flows to height - t",
    runner=_cylinder_preservation,
    space={"kind": "cylinder", "h": 0.25, "center": [0.0, 0.0], "radius": 3.0},
    initial={"preset": "height"},
    hamiltonian={"kind": "linear"},
    times=(0.5, 1.0, 2.0),
    sense="inf",
    method="eikonal",
    checks=("weak-geodesic",),
))

register(ExperimentSpec(
    name="busemann-catalog",
    description="Busemann conditions on every catalog space",
    runner=_busemann_catalog,
    checks=("busemann3", "busemann4", "equivalence", "uniform-npc",
            "midpoint-lipschitz"),
    tags={"sample_budget": 300, "quadruples": 10**4},
))

register(ExperimentSpec(
    name="lattice-rigidity",
    description="weakly convex functions on the lattice are constant",
    runner=_lattice_rigidity,
    checks=("rigidity",),
    tags={"trials": 10**5},
))

register(ExperimentSpec(
    name="npc-preservation-tree",
    description="the Hopf-Lax flow keeps convexity on a 3-star tree",
    runner=_npc_preservation_tree,
    space={"kind": "tree", "arms": 3, "length": 2.0, "h": 0.125, "radius": 2.0},
    initial={"preset": "distance"},
    hamiltonian={"kind": "quadratic"},
    times=(0.5, 1.0),
    checks=("weak-geodesic",),
))

register(ExperimentSpec(
    name="subharmonic-preservation",
    description="the lattice norm stays infinity-subharmonious under the eikonal sup",
    runner=_subharmonic_preservation,
    space={"kind": "lattice", "h": "1/4", "center": [0, 0], "radius": 6},
    initial={"preset": "norm"},
    hamiltonian={"kind": "linear"},
    times=(1.0, 2.0),
    sense="sup",
    method="eikonal",
    checks=("uniform-infty-subharmonious",),
))

register(ExperimentSpec(
    name="cross-pointwise-loss",
    description="the eikonal flow loses pointwise convexity on the cross",
    runner=_cross_pointwise_loss,
    space={"kind": "cross", "arm": 6.0, "h": 0.125, "radius": 6.0},
    initial={"preset": "cross_step"},
    hamiltonian={"kind": "linear"},
    times=(1.0,),
    sense="sup",
    method="eikonal",
    checks=("pointwise", "infty-subharmonious"),
))

register(ExperimentSpec(
    name="alpha-convergence",
    description="H = p^alpha / alpha approaches the eikonal solution as alpha -> 1",
    runner=_alpha_convergence,
    space={"kind": "halfline", "h": 0.01, "center": [6.0], "radius": 6.0},
    initial={"preset": "neg_x"},
    hamiltonian={"kind": "linear"},
    times=(1.0,),
    method="eikonal",
    tags={"alphas": (2.0, 1.5, 1.2, 1.05)},
))


def list_experiments():
    """Names and descriptions of the registered experiments."""
    return pd.DataFrame(
        [(s.name, s.description) for s in registry.values()],
        columns=["name", "description"],
    )


def run_experiment(name, out_dir=None, seed=None, threads=1, fmt="both"):
    """Run a registered experiment and compare it against its goldens.

    Parameters
    ----------
    name: string
        Registered experiment name.
    out_dir: string, optional
        Directory for the JSON report and CSV tables; nothing is written
        when omitted.
    seed: int, optional
        Overrides the registered seed.
    threads: int
        Worker threads for the solves; results do not depend on it.
    fmt: string
        ``"json"``, ``"csv"`` or ``"both"``.

    Returns
    -------
    report: :obj:`ExperimentReport`
        ``report.passed`` is True iff every golden matches.

    Raises
    ------
    UnknownExperimentError
        If ``name`` is not registered.

    """
    if name not in registry:
        raise UnknownExperimentError(name, sorted(registry))
    spec = registry[name]
    seed = spec.seed if seed is None else seed
    logger.info("running experiment %s (seed %d, %d thread(s))", name, seed, threads)
    start = time.perf_counter()
    report = spec.runner(spec, seed, threads)
    report.wall_time = time.perf_counter() - start
    failed = [g.name for g in report.goldens if not g.matches]
    if failed:
        logger.warning("%s: %d golden value(s) do not match: %s", name, len(failed),
                       ", ".join(failed))
    else:
        logger.info("%s: all %d golden values match", name, len(report.goldens))
    if out_dir is not None:
        for path in report.write(out_dir, fmt):
            logger.info("wrote %s", path)
    return report
