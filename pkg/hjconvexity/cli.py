"""
Command line interface.

Subcommands::

    hjconvexity solve --config run.toml [--out DIR]
    hjconvexity check --config run.toml [--notion NAME]
    hjconvexity experiment NAME [--out DIR]
    hjconvexity experiment --list

Exit codes are 0 when every verdict or golden value passes, 1 when a check
fails or a golden value does not match, and 2 for configuration errors.
"""

import argparse
import logging
import os
import sys

import pandas as pd

from hjconvexity.config import (
    NOTIONS,
    SPACE_NOTIONS,
    build_hamiltonian,
    build_initial,
    build_space,
    load_config,
)
from hjconvexity.convexity import (
    check_infty_subharmonious,
    check_local_to_global,
    check_one_weak_lattice,
    check_pointwise,
    check_weak_geodesic,
    lattice_rigidity_check,
    midpoint_lipschitz_check,
)
from hjconvexity.experiments import list_experiments, run_experiment
from hjconvexity.hopflax import solve
from hjconvexity.structure import (
    check_busemann3,
    check_busemann4,
    check_equivalence_3_4,
    check_uniform_npc,
)
from hjconvexity.utils import (
    ConfigError,
    ResolutionError,
    UnknownExperimentError,
    jsonable,
    to_str,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common_options():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--out", default="hjconvexity-out",
                        help="Directory for reports (default: hjconvexity-out)")
    parent.add_argument("--seed", type=int, default=None,
                        help="Seed for every sampled check")
    parent.add_argument("--threads", type=int, default=1,
                        help="Worker threads; results do not depend on it")
    parent.add_argument("--format", dest="fmt", choices=("json", "csv", "both"),
                        default="both", help="Report format (default: both)")
    parent.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    return parent


def build_parser():
    parent = _common_options()
    parser = argparse.ArgumentParser(
        prog="hjconvexity",
        description="Hopf-Lax solutions and convexity certificates on geodesic "
                    "spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[parent],
                       help="Solve the configured problem at every time")
    p.add_argument("--config", required=True, help="TOML run configuration")

    p = sub.add_parser("check", parents=[parent],
                       help="Certify a convexity or Busemann notion")
    p.add_argument("--config", required=True, help="TOML run configuration")
    p.add_argument("--notion", choices=NOTIONS, default=None,
                   help="Overrides [checks].notion")

    p = sub.add_parser("experiment", parents=[parent],
                       help="Run a registered golden experiment")
    p.add_argument("name", nargs="?", help="Experiment name")
    p.add_argument("--list", action="store_true", help="List the experiments")
    return parser


def _write(report, out, stem, fmt, frame=None):
    os.makedirs(out, exist_ok=True)
    if fmt in ("json", "both"):
        path = os.path.join(out, f"{stem}.json")
        report.to_json(path)
        logger.info("wrote %s", path)
    if fmt in ("csv", "both") and frame is not None:
        path = os.path.join(out, f"{stem}.csv")
        frame.to_csv(path, index=False)
        logger.info("wrote %s", path)


def solve_cmd(args):
    """Solve at every configured time and write field slices."""
    config = load_config(args.config,
                         require=("space", "hamiltonian", "initial", "times"))
    space, center, radius = build_space(config)
    u0 = build_initial(config, space, center, radius)
    H = build_hamiltonian(config)
    times = config["times"]
    logger.info("solving on %r with %d sample points", space, len(u0))
    for t in times["values"]:
        stem = f"u_t{t:g}"
        if t == 0:
            os.makedirs(args.out, exist_ok=True)
            if args.fmt in ("csv", "both"):
                u0.to_csv(os.path.join(args.out, f"{stem}.csv"))
            continue
        report = solve(space, u0, H, t, sense=times["sense"],
                       method=times["method"], threads=args.threads)
        logger.info("t=%g: %d of %d points complete", t, int(report.complete.sum()),
                    len(u0))
        _write(report, args.out, stem, args.fmt, report.to_frame())
    return EXIT_OK


def _field_for_check(config, space, center, radius, threads):
    u0 = build_initial(config, space, center, radius)
    t = config.get("checks", {}).get("time", 0)
    if not t:
        return u0
    if "hamiltonian" not in config:
        raise ConfigError("[checks].time needs a [hamiltonian] table")
    times = config.get("times", {})
    report = solve(space, u0, build_hamiltonian(config), t,
                   sense=times.get("sense", "inf"),
                   method=times.get("method", "hopflax"), threads=threads)
    return report.field


def run_check(notion, config, seed=None, threads=1):
    """Dispatch ``notion`` to its check and return the report."""
    table = config.get("checks", {})
    seed = table.get("seed", 0) if seed is None else seed
    tau = table.get("tau")
    pair_budget = table.get("pair_budget", 2000)
    sample_budget = table.get("sample_budget", 2000)
    space, center, radius = build_space(config)
    f = None
    if notion not in SPACE_NOTIONS:
        if "initial" not in config:
            raise ConfigError(f"notion {notion!r} needs an [initial] table")
        f = _field_for_check(config, space, center, radius, threads)
    delta = table.get("delta")
    r_grid = table.get("r_grid")

    if notion in ("weak-geodesic", "strong-geodesic"):
        return check_weak_geodesic(space, f, pair_budget, tau, seed,
                                   strong=notion == "strong-geodesic",
                                   threads=threads)
    elif notion == "local-to-global":
        delta = 4.0 * float(space.h) if delta is None else delta
        return check_local_to_global(space, f, delta, tau, pair_budget, seed,
                                     threads=threads)
    elif notion in ("infty-subharmonious", "uniform-infty-subharmonious"):
        return check_infty_subharmonious(
            space, f, delta, r_grid, tau,
            uniform=notion.startswith("uniform"), threads=threads,
        )
    elif notion == "pointwise":
        return check_pointwise(space, f, r_grid, tau, threads=threads)
    elif notion in ("one-weak", "one-weak-strong"):
        return check_one_weak_lattice(f, pair_budget, tau,
                                      strong=notion == "one-weak-strong", seed=seed)
    elif notion == "busemann3":
        return check_busemann3(space, sample_budget, seed, tau=tau, threads=threads)
    elif notion == "busemann4":
        return check_busemann4(space, sample_budget, seed, tau=tau, threads=threads)
    elif notion == "equivalence":
        return check_equivalence_3_4(space, sample_budget, seed, threads=threads)
    elif notion == "uniform-npc":
        if delta is None:
            raise ConfigError("notion 'uniform-npc' needs [checks].delta")
        return check_uniform_npc(space, delta, sample_budget, seed, tau=tau,
                                 threads=threads)
    elif notion == "midpoint-lipschitz":
        budget = table.get("sample_budget", 10**4)
        return midpoint_lipschitz_check(space, budget=budget, seed=seed, tau=tau)
    elif notion == "rigidity":
        return lattice_rigidity_check(tau=1e-9 if tau is None else tau,
                                      trials=table.get("pair_budget", 10**5),
                                      seed=seed)
    else:
        raise ValueError(f"unknown notion {notion!r}; known: {', '.join(NOTIONS)}")


def verdict_table(notion, report):
    """One-row summary of a check report."""
    witness = getattr(report, "witness", None)
    return pd.DataFrame([{
        "notion": notion,
        "verdict": report.verdict,
        "margin": jsonable(getattr(report, "margin", None)),
        "witness": to_str(witness, delimiter=" ") if witness is not None else None,
    }])


def check_cmd(args):
    config = load_config(args.config, require=("space",))
    notion = args.notion or config.get("checks", {}).get("notion")
    if notion is None:
        raise ConfigError("no notion given: use --notion or [checks].notion",
                          args.config)
    logger.info("checking %s", notion)
    report = run_check(notion, config, args.seed, args.threads)
    _write(report, args.out, f"check_{notion}", args.fmt,
           getattr(report, "frame", None))
    print(verdict_table(notion, report).to_string(index=False))
    return EXIT_OK if report.passed else EXIT_FAIL


def experiment_cmd(args):
    if args.list:
        print(list_experiments().to_string(index=False))
        return EXIT_OK
    if not args.name:
        raise ConfigError("give an experiment name or --list")
    report = run_experiment(args.name, args.out, args.seed, args.threads, args.fmt)
    if report.passed:
        print(f"{args.name}: PASS ({len(report.goldens)} golden values)")
        return EXIT_OK
    print(f"{args.name}: FAIL")
    print(report.diff_table(mismatches_only=True).to_string(index=False))
    return EXIT_FAIL


def main(argv=None):
    """Entry point of the ``hjconvexity`` console script."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    commands = {"solve": solve_cmd, "check": check_cmd, "experiment": experiment_cmd}
    try:
        return commands[args.command](args)
    except (ConfigError, UnknownExperimentError) as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except (ResolutionError, TypeError, ValueError) as err:
        # a field or notion that does not fit the configured space
        logger.error("%s", err)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
