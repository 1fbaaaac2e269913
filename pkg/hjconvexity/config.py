"""
Run configurations.

A run is described by a TOML file with the tables ``[space]``,
``[hamiltonian]``, ``[initial]``, ``[times]`` and ``[checks]``::

    [space]
    kind = "lattice"
    h = "1/4"
    center = [0, 0]
    radius = 20

    [hamiltonian]
    kind = "linear"

    [initial]
    preset = "quadrant_product"

    [times]
    values = [4]
    sense = "inf"
    method = "eikonal"

:func:`load_config` parses the file and validates it key by key; the
``build_*`` helpers turn the validated tables into library objects.
"""

import logging
import os
import re
import sys
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from hjconvexity.hamiltonian import hamiltonian_from_config
from hjconvexity.hopflax import ScalarField
from hjconvexity.presets.fields import preset_function
from hjconvexity.presets.fields import presets as known_presets
from hjconvexity.spaces import Cross, space_from_config
from hjconvexity.utils import ConfigError

logger = logging.getLogger(__name__)

SPACE_KINDS = ("euclidean", "halfline", "cylinder", "lattice", "tree", "cross")
HAMILTONIAN_KINDS = ("power", "quadratic", "linear", "table")

NOTIONS = (
    "weak-geodesic",
    "strong-geodesic",
    "local-to-global",
    "infty-subharmonious",
    "uniform-infty-subharmonious",
    "pointwise",
    "one-weak",
    "one-weak-strong",
    "busemann3",
    "busemann4",
    "equivalence",
    "uniform-npc",
    "midpoint-lipschitz",
    "rigidity",
)

# notions that read the space only, not a field
SPACE_NOTIONS = (
    "busemann3", "busemann4", "equivalence", "uniform-npc", "midpoint-lipschitz",
    "rigidity",
)

KEYS = {
    "space": {"kind", "h", "eps_mid", "center", "radius", "dim", "p", "edges",
              "arms", "length", "root", "arm", "box"},
    "hamiltonian": {"kind", "alpha", "points", "growth"},
    "initial": {"preset", "file", "lipschitz", "value", "scale", "seed"},
    "times": {"values", "sense", "method"},
    "checks": {"notion", "pair_budget", "sample_budget", "tau", "delta", "r_grid",
               "seed", "time"},
}

DEFAULT_RADIUS = 2.0

# [initial] keys forwarded to the preset
PRESET_KEYS = ("value", "scale", "seed")

_HEADER = re.compile(r"^\s*\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]")
_AT_LINE = re.compile(r"line (\d+)")


def _table_lines(text):
    lines = {}
    for n, line in enumerate(text.splitlines(), start=1):
        match = _HEADER.match(line)
        if match:
            lines.setdefault(match.group(1), n)
    return lines


def _number(value, name, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{name} must be a number, got {value!r}")
    if positive and not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def _check_space(table):
    kind = table.get("kind")
    if kind is None:
        raise ValueError("missing key 'kind'")
    if kind not in SPACE_KINDS:
        raise ValueError(
            f"unknown space kind {kind!r}; expected one of {', '.join(SPACE_KINDS)}"
        )
    if "h" in table and kind != "lattice" and isinstance(table["h"], str):
        table["h"] = float(Fraction(table["h"]))
    if "radius" in table:
        _number(table["radius"], "radius", positive=True)
    if "center" in table and not isinstance(table["center"], list):
        raise ValueError(
            f"center must be a list of coordinates, got {table['center']!r}"
        )
    if kind == "tree" and "edges" not in table and "arms" not in table:
        raise ValueError("a tree space needs 'edges' or 'arms'")
    # builds the space once so kind-specific errors surface here
    space_from_config(table)


def _check_hamiltonian(table):
    kind = table.get("kind")
    if kind is None:
        raise ValueError("missing key 'kind'")
    if kind not in HAMILTONIAN_KINDS:
        raise ValueError(
            f"unknown Hamiltonian kind {kind!r}; expected one of "
            f"{', '.join(HAMILTONIAN_KINDS)}"
        )
    if kind == "power":
        if "alpha" not in table:
            raise ValueError("missing key 'alpha'")
        if _number(table["alpha"], "alpha") <= 1:
            raise ValueError(f"alpha must exceed 1, got {table['alpha']}")
    if kind == "table" and "points" not in table:
        raise ValueError("missing key 'points'")


def _check_initial(table, base):
    if ("preset" in table) == ("file" in table):
        raise ValueError("give exactly one of 'preset' or 'file'")
    if "preset" in table:
        name = table["preset"]
        if name != "random_convex" and name not in known_presets:
            raise ValueError(
                f"unknown preset {name!r}; known: {', '.join(sorted(known_presets))}, "
                "random_convex"
            )
    else:
        path = table["file"]
        if base is not None and not os.path.isabs(path):
            path = os.path.join(base, path)
        if not os.path.exists(path):
            raise ValueError(f"field file {table['file']!r} does not exist")
        table["file"] = path
    if "lipschitz" in table:
        _number(table["lipschitz"], "lipschitz")


def _check_times(table):
    values = table.get("values")
    if not isinstance(values, list) or not values:
        raise ValueError("'values' must be a nonempty list of times")
    for t in values:
        if _number(t, "time") < 0:
            raise ValueError(f"times must be nonnegative, got {t}")
    table.setdefault("sense", "inf")
    table.setdefault("method", "hopflax")
    if table["sense"] not in ("inf", "sup"):
        raise ValueError(f"sense must be 'inf' or 'sup', got {table['sense']!r}")
    if table["method"] not in ("hopflax", "eikonal"):
        raise ValueError(
            f"method must be 'hopflax' or 'eikonal', got {table['method']!r}"
        )


def _check_checks(table):
    notion = table.get("notion")
    if notion is None:
        raise ValueError("missing key 'notion'")
    if notion not in NOTIONS:
        raise ValueError(f"unknown notion {notion!r}; known: {', '.join(NOTIONS)}")
    for key in ("pair_budget", "sample_budget", "seed"):
        if key in table and not isinstance(table[key], int):
            raise ValueError(f"{key} must be an integer, got {table[key]!r}")
    for key in ("tau", "time"):
        if key in table:
            _number(table[key], key)
    if "delta" in table:
        _number(table["delta"], "delta", positive=True)
    if "r_grid" in table:
        if not isinstance(table["r_grid"], list) or not table["r_grid"]:
            raise ValueError("'r_grid' must be a nonempty list of radii")
        for r in table["r_grid"]:
            _number(r, "radius", positive=True)


def load_config(path, require=("space",)):
    """Read and validate a TOML run configuration.

    Parameters
    ----------
    path: string
        Path of the TOML file.
    require: sequence of string
        Tables that must be present.

    Returns
    -------
    config: dict
        One dictionary per table. Relative ``[initial].file`` paths are
        resolved against the directory of ``path``.

    Raises
    ------
    ConfigError
        On TOML syntax errors, unknown tables or keys, missing tables or
        invalid values. The error carries ``path`` and the line of the
        offending table header.

    """
    path = str(path)
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as err:
        raise ConfigError(f"cannot read configuration: {err.strerror}", path) from err
    text = raw.decode("utf-8")
    try:
        config = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        match = _AT_LINE.search(str(err))
        raise ConfigError(
            f"invalid TOML: {err}", path, int(match.group(1)) if match else None
        ) from err

    lines = _table_lines(text)
    for name in config:
        if name not in KEYS:
            raise ConfigError(
                f"unknown table [{name}]; expected {', '.join(KEYS)}", path,
                lines.get(name),
            )
        if not isinstance(config[name], dict):
            raise ConfigError(f"[{name}] must be a table", path)
    for name in require:
        if name not in config:
            raise ConfigError(f"missing table [{name}]", path)

    base = os.path.dirname(os.path.abspath(path))
    checks = {
        "space": _check_space,
        "hamiltonian": _check_hamiltonian,
        "initial": lambda table: _check_initial(table, base),
        "times": _check_times,
        "checks": _check_checks,
    }
    for name, table in config.items():
        unknown = sorted(set(table) - KEYS[name])
        try:
            if unknown:
                raise ValueError(f"unknown key(s) {', '.join(unknown)}")
            checks[name](table)
        except (ValueError, TypeError) as err:
            raise ConfigError(f"[{name}]: {err}", path, lines.get(name)) from err

    logger.debug("loaded %s with tables %s", path, ", ".join(config))
    return config


def build_space(config):
    """The space and the sampled patch ``(center, radius)`` of a config."""
    table = config["space"]
    space = space_from_config(table)
    if "center" not in table:
        center = space.origin
    elif isinstance(space, Cross):
        center = space.planar(*table["center"])
    else:
        center = space.point(*table["center"])
    radius = table.get("radius")
    if radius is None:
        # compact spaces default to the whole space
        radius = min(space.eccentricity(center), DEFAULT_RADIUS)
    return space, center, radius


def build_initial(config, space, center, radius):
    """The initial field ``u0`` described by ``[initial]``.

    Raises
    ------
    ConfigError
        If the preset does not apply to the space.

    """
    table = config["initial"]
    lipschitz = table.get("lipschitz")
    if "file" in table:
        return ScalarField.from_csv(space, table["file"], lipschitz=lipschitz)
    kwargs = {k: table[k] for k in PRESET_KEYS if k in table}
    try:
        func, K = preset_function(space, table["preset"], **kwargs)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"[initial]: {err}") from err
    return ScalarField.on_patch(
        space, center, radius, func, lipschitz=K if lipschitz is None else lipschitz
    )


def build_hamiltonian(config):
    return hamiltonian_from_config(config["hamiltonian"])
