"""Tests of the TOML run configurations"""

import os
from fractions import Fraction
from textwrap import dedent

import pytest

from hjconvexity.config import build_initial, build_space, load_config
from hjconvexity.experiments import registry
from hjconvexity.spaces import HalfLine, Lattice2
from hjconvexity.utils import ConfigError

DATA = os.path.join(os.path.dirname(__file__), "data")


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(dedent(text))
    return path


def test_replays_a_registered_experiment():
    config = load_config(os.path.join(DATA, "lattice_nonpreservation.toml"))
    assert config == registry["lattice-nonpreservation"].config()


def test_field_file_is_resolved_next_to_the_config():
    config = load_config(os.path.join(DATA, "halfline_csv.toml"))
    assert config["initial"]["file"] == os.path.join(DATA, "halfline_u0.csv")
    assert config["space"]["h"] == 0.25
    assert config["times"] == {"values": [0.25, 0.5], "sense": "inf",
                               "method": "hopflax"}
    space, center, radius = build_space(config)
    u0 = build_initial(config, space, center, radius)
    assert isinstance(space, HalfLine)
    assert len(u0) == 9
    assert u0.lipschitz == 1.0
    assert u0.value_at(space.point(2)) == -2.0


def test_build_space_defaults(tmp_path):
    path = write(tmp_path, """
        [space]
        kind = "lattice"
        h = "1/8"
    """)
    space, center, radius = build_space(load_config(path))
    assert isinstance(space, Lattice2)
    assert space.h == Fraction(1, 8)
    assert (center, radius) == (space.origin, 2.0)


def test_compact_space_is_sampled_whole(tmp_path):
    path = write(tmp_path, """
        [space]
        kind = "tree"
        arms = 3
        length = 1.0
    """)
    _, _, radius = build_space(load_config(path))
    assert radius == 1.0


def test_missing_kind_reports_the_line(tmp_path):
    path = write(tmp_path, """\
        [space]
        kind = "halfline"

        [hamiltonian]
        alpha = 2.0
    """)
    with pytest.raises(ConfigError, match="missing key 'kind'") as err:
        load_config(path)
    assert err.value.line == 4
    assert str(err.value).startswith(f"{path}:4: [hamiltonian]")


@pytest.mark.parametrize(
    "text, match",
    [
        ('[space]\nkind = "halfline"\n[solver]\nthreads = 2\n', "unknown table"),
        ('[space]\nkind = "halfline"\ncolour = 1\n', "unknown key"),
        ('[space]\nkind = "sphere"\n', "unknown space kind"),
        ('[space]\nkind = "tree"\n', "'edges' or 'arms'"),
        ('[space]\nkind = "lattice"\nh = "1/3"\n', "space"),
        ('[space]\nkind = "halfline"\nradius = -1\n', "radius must be positive"),
        ('[space]\nkind = "halfline"\n[hamiltonian]\nkind = "power"\nalpha = 1\n',
         "alpha must exceed 1"),
        ('[space]\nkind = "halfline"\n[hamiltonian]\nkind = "cubic"\n',
         "unknown Hamiltonian kind"),
        ('[space]\nkind = "halfline"\n[initial]\npreset = "neg_x"\nfile = "u.csv"\n',
         "exactly one of"),
        ('[space]\nkind = "halfline"\n[initial]\npreset = "bump"\n',
         "unknown preset"),
        ('[space]\nkind = "halfline"\n[initial]\nfile = "nowhere.csv"\n',
         "does not exist"),
        ('[space]\nkind = "halfline"\n[times]\nvalues = [1, -1]\n',
         "times must be nonnegative"),
        ('[space]\nkind = "halfline"\n[times]\nvalues = []\n', "nonempty list"),
        ('[space]\nkind = "halfline"\n[times]\nvalues = [1]\nsense = "max"\n',
         "sense must be"),
        ('[space]\nkind = "halfline"\n[checks]\nnotion = "concave"\n',
         "unknown notion"),
        ('[space]\nkind = "halfline"\n[checks]\nnotion = "pointwise"\nseed = 1.5\n',
         "seed must be an integer"),
        ('[space]\nkind = "halfline"\n[checks]\nnotion = "uniform-npc"\ndelta = 0\n',
         "delta must be positive"),
    ],
)
def test_invalid(tmp_path, text, match):
    path = write(tmp_path, text)
    with pytest.raises(ConfigError, match=match):
        load_config(path)


def test_missing_table(tmp_path):
    path = write(tmp_path, '[space]\nkind = "halfline"\n')
    with pytest.raises(ConfigError, match=r"missing table \[times\]"):
        load_config(path, require=("space", "times"))


def test_invalid_toml(tmp_path):
    path = write(tmp_path, '[space]\nkind = "halfline"\nh = \n')
    with pytest.raises(ConfigError, match="invalid TOML") as err:
        load_config(path)
    assert err.value.line == 3


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read configuration"):
        load_config(tmp_path / "absent.toml")


def test_preset_for_another_space(tmp_path):
    path = write(tmp_path, """
        [space]
        kind = "lattice"

        [initial]
        preset = "height"
    """)
    config = load_config(path)
    space, center, radius = build_space(config)
    with pytest.raises(ConfigError, match="the height preset needs a Cylinder"):
        build_initial(config, space, center, radius)
