"""
Useful utilities shared by the solvers, the checks and the command line.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pandas as pd


def to_str(listlike, delimiter=","):
    """Translates list-like objects into strings.

    Points are rendered through their ``label`` method; a dict, such as a
    witness, becomes ``key=value`` entries.

    Parameters
    ----------
    listlike: list-like object
        An object that is a list, tuple, or list-like
        (e.g., ``pandas.core.series.Series``)
    delimiter: string, optional
        The delimiter that is placed between entries in listlike when it is
        turned into a string. Default value is a comma.

    Returns
    -------
    listlike: string
        The listlike object as string separated by the delimiter

    Examples
    --------
    .. doctest::

        >>> hjconvexity.utils.to_str([1, "a", 2])
        '1,a,2'

        >>> hjconvexity.utils.to_str([0, 10, 42], delimiter="+")
        '0+10+42'

        >>> hjconvexity.utils.to_str({"x": 1, "r": 0.5}, delimiter=" ")
        'x=1 r=0.5'

    """
    if isinstance(listlike, (list, tuple)):
        return delimiter.join([_label(x) for x in listlike])

    elif isinstance(listlike, (pd.Series, pd.Index)):
        return delimiter.join([_label(x) for x in listlike.tolist()])

    elif isinstance(listlike, dict):
        return delimiter.join([f"{k}={_label(v)}" for k, v in listlike.items()])

    elif isinstance(listlike, str):
        return listlike

    return _label(listlike)


def _label(item):
    if hasattr(item, "label"):
        return item.label()
    return str(item)


def format_dyadic(value):
    """Render a dyadic rational as ``"num/2^m"``.

    Examples
    --------
    .. doctest::

        >>> hjconvexity.utils.format_dyadic(Fraction(15, 2))
        '15/2^1'

        >>> hjconvexity.utils.format_dyadic(4)
        '4/2^0'

    """
    value = Fraction(value)
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{value} is not a dyadic rational")
    return f"{value.numerator}/2^{den.bit_length() - 1}"


def parse_dyadic(text):
    """Parse ``"num/2^m"``, ``"num/den"``, integers or decimal strings.

    Floats are accepted as they are (every float is dyadic).

    Raises
    ------
    ValueError
        If the value does not denote a dyadic rational.

    """
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, (float, np.floating)):
        value = Fraction(float(text))
    elif isinstance(text, (int, np.integer)):
        value = Fraction(int(text))
    else:
        text = str(text).strip()
        if "/2^" in text:
            num, exp = text.split("/2^")
            value = Fraction(int(num), 2 ** int(exp))
        else:
            value = Fraction(text)
    den = value.denominator
    if den & (den - 1):
        raise ValueError(f"{text!r} is not a dyadic rational")
    return value


def is_dyadic(value):
    """Return True when ``value`` is a dyadic rational."""
    try:
        parse_dyadic(value)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def jsonable(obj):
    """Convert report content into JSON-serializable builtins."""
    if hasattr(obj, "to_record"):
        return jsonable(obj.to_record())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_dyadic(obj) if is_dyadic(obj) else str(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, pd.DataFrame):
        return [jsonable(r) for r in obj.to_dict(orient="records")]
    return obj


def parallel_map(func, items, threads=1):
    """Apply ``func`` to every item, preserving input order.

    With ``threads > 1`` the calls run on a thread pool; the results are
    collected in submission order, so the output does not depend on the
    schedule.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))


def chunks(n, parts):
    """Split ``range(n)`` into at most ``parts`` contiguous ranges."""
    parts = max(1, min(parts, n)) if n else 1
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


class BaseReport:
    """Base class for verdict objects.

    Attributes
    ----------
    name : str
        Tag of the check or solve that produced the report
    wall_time: float
        Elapsed seconds
    parameters: dict
        Parameters the report was computed with
    notes: list of str
        Free-text remarks (for example literature discrepancies)

    """

    def __init__(self, name, parameters=None, wall_time=0.0) -> None:
        self.name = name
        self.parameters = dict(parameters or {})
        self.wall_time = wall_time
        self.notes = []

    # These properties are to be set by the concrete report classes.
    @property
    def passed(self):
        raise NotImplementedError(
            "passed must be implemented by utils.BaseReport children"
        )

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"

    def to_record(self):
        raise NotImplementedError(
            "to_record must be implemented by utils.BaseReport children"
        )

    def to_json(self, path=None, indent=2):
        """Serialize the report, writing it to ``path`` when given."""
        text = json.dumps(jsonable(self.to_record()), indent=indent)
        if path is not None:
            with open(path, "w") as f:
                f.write(text + "\n")
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name}, verdict={self.verdict})"


class DomainError(ValueError):
    """Raised when a point does not belong to the space it is used in."""

    def __init__(self, space, point, reason=""):
        self.space = space
        self.point = point
        self.reason = reason

    def __str__(self):
        msg = f"point {self.point!r} is outside the space {self.space}"
        if self.reason:
            msg += f": {self.reason}"
        return msg


class EnumerationError(IndexError):
    """Raised when a geodesic branch index is out of range."""

    def __init__(self, branch, available):
        self.branch = branch
        self.available = available

    def __str__(self):
        return (
            f"geodesic branch {self.branch} requested but only "
            f"{self.available} branch(es) exist"
        )


class TruncationError(ArithmeticError):
    """Raised when the Legendre sup is attained at the end of the p-grid."""

    def __init__(self, v, p_max):
        self.v = v
        self.p_max = p_max

    def __str__(self):
        return (
            f"sup over p of (p*v - H(p)) at v={self.v} is attained at "
            f"p_max={self.p_max}; raise p_max"
        )


class UnboundedSpeedError(ArithmeticError):
    """Raised when L(v)/v never exceeds K, so no finite speed exists."""

    def __init__(self, K, limit):
        self.K = K
        self.limit = limit

    def __str__(self):
        return (
            f"L(v)/v <= {self.K} up to v={self.limit}; the Lagrangian is not "
            "coercive, use the eikonal path"
        )


class ResolutionError(ValueError):
    """Raised when a midpoint needed by a check is not a sample point."""

    def __init__(self, message, point=None):
        self.message = message
        self.point = point

    def __str__(self):
        if self.point is None:
            return self.message
        return f"{self.message}: {self.point!r}"


class SolveError(ValueError):
    """Raised when a Hopf-Lax evaluation cannot be carried out."""


class ConfigError(ValueError):
    """Raised for configuration files that cannot be parsed or validated."""

    def __init__(self, message, path=None, line=None):
        self.message = message
        self.path = path
        self.line = line

    def __str__(self):
        where = ""
        if self.path is not None:
            where = f"{self.path}"
            if self.line is not None:
                where += f":{self.line}"
            where += ": "
        return f"{where}{self.message}"


class UnknownExperimentError(KeyError):
    """Raised when an experiment name is not in the registry."""

    def __init__(self, name, known):
        self.name = name
        self.known = known

    def __str__(self):
        return f"unknown experiment {self.name!r}; known: {', '.join(self.known)}"
