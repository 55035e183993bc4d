from fractions import Fraction as F

import pytest

from schurlat.cli import EXAMPLES, example_text
from schurlat.config import ConfigError, RunParams, parse_config

HEXAGON = """
[model]
n = 2
x = 1, 1/2
blocks = 0:1/6, 13/6:7/3, 16/3:11/2, 17/2:35/4, 51/4:13
"""


def test_minimal_hexagon_config():
    cfg = parse_config(HEXAGON)
    assert cfg.model.n == 2
    assert cfg.model.a == (1, 1)
    assert cfg.model.blocks[-1] == (F(51, 4), F(13))
    assert cfg.run == RunParams()
    m1, m2 = cfg.model.asymptotics().measures
    assert m1.intervals == ((F(17), F(35, 2)), (F(51, 2), F(26)))


@pytest.mark.parametrize("name", EXAMPLES)
def test_bundled_configs_parse(name):
    assert parse_config(example_text(name)).model.n >= 1


def test_run_and_output_sections():
    cfg = parse_config(HEXAGON + "[run]\nkappa = 0.3  # level\np = 2\n[output]\ndir = out\nsvg = no\n")
    assert cfg.run.kappa == 0.3 and cfg.run.p == 2
    assert cfg.output.dir == "out" and cfg.output.svg is False


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("[model]\nx = 1\ny = -2\na = 0\n", 3, "positive"),
        ("[run]\nkappa = 0.5\n", None, "missing [model]"),
        ("[model]\nx = 1\ncolour = red\n", 3, "unknown key"),
        ("[model]\nx = 1\n[extra]\nk = 1\n", 3, "unknown section"),
        ("[model]\nx = 1\nx = 2\n", 3, "duplicate"),
        ("x = 1\n", 1, "before the first"),
        ("[model]\nx = 1\n[run]\nkappa = 1.5\n", 4, "kappa"),
        ("[model]\nx = 1\n[run]\np = two\n", 4, "bad value"),
        ("[model]\nx = 1\na = 0\n", 3, "y weight"),
        ("[model]\nx = 1\nblocks = 0:1/2\n", 3, "total length"),
        ("[model]\nx = 1, 2\nn = 3\n", 3, "n=3"),
        ("[model]\nx = 1\npositions = 2, 3\n", 3, "start at 1"),
        ("[model]\nx = 1\nlambda = 1, 2\n", 3, "weakly decreasing"),
        ("[model]\nx = 1\n[output]\nsvg = maybe\n", 4, "bad value"),
    ],
)
def test_rejections_name_the_line(text, line, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert fragment in str(err.value)
    if line is not None:
        assert err.value.line == line


def test_overrides_are_validated():
    cfg = parse_config(HEXAGON)
    assert cfg.with_overrides(jobs=3, tol=None).run.jobs == 3
    with pytest.raises(ConfigError):
        cfg.with_overrides(tol=-1.0)
