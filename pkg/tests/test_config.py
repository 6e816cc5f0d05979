import math

import pytest
from hypothesis import given, settings, strategies as st

from pshlab.config import (ExperimentConfig, format_float, format_weight, parse_config, parse_function,
                           parse_harmonic, parse_weight, print_config)
from pshlab.errors import ConfigError
from pshlab.functions import ImagPart, Outer, PowerBranch, RealPart
from pshlab.measures import RieszMeasure

DOC = """\
command: norm
weights:
  - atom 0.5 1
  - radial 0.5
functions: [pow 0.2, affine 1 1]
p: [1.5, 2]
tol: 1.0e-9
"""


def test_parse_document():
    cfg = parse_config(DOC)
    assert cfg.command == "norm"
    assert cfg.weights == ["atom 0.5 1", "radial 0.5"]
    assert cfg.p == [1.5, 2.0] and cfg.tol == 1e-9
    assert cfg.suite == "core" and cfg.grid_size == 4096


def test_round_trip_is_identity():
    cfg = parse_config(DOC)
    text = print_config(cfg)
    assert parse_config(text) == cfg
    assert print_config(parse_config(text)) == text


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["density", "norm", "measure", "verify"]),
       st.lists(st.floats(0.1, 5, allow_nan=False), min_size=1, max_size=3),
       st.lists(st.floats(-5, -1e-6), min_size=1, max_size=4),
       st.floats(1e-14, 1e-2), st.integers(16, 10000))
def test_round_trip_property(command, p, r_grid, tol, grid):
    cfg = ExperimentConfig(command=command, weights=["atom 0.3 1"], p=p, r_grid=r_grid, tol=tol, grid_size=grid)
    assert parse_config(print_config(cfg)) == cfg


@pytest.mark.parametrize("text, line, col", [
    ("command: norm\nbogus: 1\n", 2, 1),
    ("command: norm\np: [2, -1]\n", 2, 8),
    ("command: norm\nweights:\n  - atom 0.5 1\n  - atom 2 1\n", 4, 5),
    ("command: fly\n", 1, 10),
    ("command: norm\nsuite: [1\n", 3, 1),
])
def test_errors_carry_location(text, line, col):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_document_must_be_mapping():
    with pytest.raises(ConfigError):
        parse_config("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        parse_config("p: [2]\n")


def test_weight_grammar():
    nu = parse_weight("atom 0.3 1 + atom 0 -0.4 2 + 2 * radial 0.5 1 0.9")
    assert nu.atoms == ((0.3 + 0j, 1.0), (-0.4j, 2.0))
    r = nu.radial[0]
    assert (r.beta, r.kappa, r.s_max) == (0.5, 2.0, 0.9)
    assert parse_weight("radial 0.5") == RieszMeasure.radial_power(0.5)
    assert parse_weight(format_weight(nu)) == nu


@pytest.mark.parametrize("bad", ["", "atom", "atom 0.5", "atom 1.5 1", "radial 1.0", "cloud 1", "x * atom 0 1",
                                 "atom 0.5 -1"])
def test_weight_errors(bad):
    with pytest.raises(ConfigError):
        parse_weight(bad)


def test_function_grammar():
    f = parse_function("mul (pow 0.2) (affine 1 -0.5)")
    assert f.to_expr() == "mul (pow 0.2) (affine 1.0 -0.5)"
    assert parse_function("scale 0.9 z").to_expr() == "scale 0.9 (z)"
    assert parse_function("pow 0.3 1.5") == PowerBranch(0.3, 1.5)
    g = parse_function("rpow 0.5 outer", RieszMeasure.atom(0.5))
    assert isinstance(g.base, Outer)


@pytest.mark.parametrize("bad", ["", "pow", "affine 1", "mul (z)", "rpow 0.5 (affine 1 -0.5)", "outer", "blah 1",
                                 "z z", "mobius 1 0 2 1", "(z", "scale x z"])
def test_function_errors(bad):
    with pytest.raises(ConfigError):
        parse_function(bad)


def test_harmonic_grammar():
    assert isinstance(parse_harmonic("re mobius 1 0 -0.8 1"), RealPart)
    assert isinstance(parse_harmonic("im z"), ImagPart)
    with pytest.raises(ConfigError):
        parse_harmonic("abs z")


def test_float_format():
    assert format_float(1.0) == "1.000000000000e+00"
    assert format_float(-2.5e-10) == "-2.500000000000e-10"
    assert format_float(math.inf) == "inf"
    assert format_float(math.nan) == "nan"
