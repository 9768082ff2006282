from __future__ import annotations

import time

import pytest

from trisect.catalog import (ALL_NAMES, FIGURE_ONE, FIGURE_TWO,
                             GENUS_ONE_PARAMS, genus_one_diagram,
                             genus_zero_diagram, match_genus_one,
                             stabilization_diagram, triangle_sign)
from trisect.diagram import trisection_params


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def test_catalog_params_match_declared():
    start = time.monotonic()
    for name in ALL_NAMES:
        t = genus_one_diagram(name)
        params, v = trisection_params(t)
        assert v.is_verified, (name, v.reason)
        assert params.ks == GENUS_ONE_PARAMS[name]
    assert time.monotonic() - start < 1.0


def test_triangle_signs():
    # oracle: explicit determinant products over the slope triples
    for name, slopes in (("CP2", ((1, 0), (0, 1), (1, 1))),
                         ("CP2R", ((1, 0), (0, 1), (1, -1)))):
        a, b, c = slopes
        oracle = _det(a, b) * _det(b, c) * _det(c, a)
        assert oracle in (1, -1)
        t = genus_one_diagram(name)
        assert triangle_sign(t) == oracle
    assert triangle_sign(genus_one_diagram("CP2")) == 1
    assert triangle_sign(genus_one_diagram("CP2R")) == -1
    assert triangle_sign(genus_one_diagram("S1xS3")) == 0


def test_match_genus_one_all():
    for name in ALL_NAMES:
        got, v = match_genus_one(genus_one_diagram(name))
        assert got == name and v.is_verified


def test_figure_groups():
    assert set(FIGURE_ONE) == {"CP2", "CP2R", "S1xS3"}
    assert set(FIGURE_TWO) == {"S4STAB1", "S4STAB2", "S4STAB3"}
    for i in (1, 2, 3):
        t = stabilization_diagram(i)
        expected = [0, 0, 0]
        expected[i - 1] = 1
        assert t.declared_params == tuple(expected)


def test_genus_zero():
    t = genus_zero_diagram()
    params, v = trisection_params(t)
    assert params.ks == (0, 0, 0) and v.is_verified
    with pytest.raises(ValueError):
        match_genus_one(t)
    with pytest.raises(ValueError):
        genus_one_diagram("nope")
