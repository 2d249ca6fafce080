"""Tent contours, validity regions and the panel quadrature."""

import math

import numpy as np
import pytest

from complexaj.contour import (
    ContourError,
    QuadratureError,
    RegionSpec,
    build_gamma,
    quadrature,
    region_contains,
    triangle_apex,
    wedge_below,
)
from complexaj.qdilog import ANPointC, DilogParams, pole_zero_locus


def test_reference_tent(params):
    a = -2 * params.cb - 1
    c = build_gamma(-0.5, a, 6.0, params)
    assert len(c.segments) == 4
    assert c.apex == a
    # every pole of 1/phi(y) lies strictly below
    for _, pole in pole_zero_locus(params, 6, 6):
        y = -pole.x
        assert y.imag < c.height(y.real) or abs(y.real) > c.H


def test_straight_when_apex_on_baseline(params):
    c = build_gamma(-0.5, complex(0.3, -0.5 * params.b.real), 5.0, params)
    assert len(c.segments) == 1


@pytest.mark.parametrize("eps", [0.0, 0.3])
def test_nonnegative_eps_rejected(params, eps):
    with pytest.raises(ContourError):
        build_gamma(eps, 0j, 5.0, params)


def test_height_too_small(params):
    with pytest.raises(ContourError):
        build_gamma(-0.5, complex(0, 3.0), 1.0, params)


def test_wedge_test(params):
    c = build_gamma(-0.5, 0j, 5.0, params)
    assert wedge_below(c, triangle_apex(params))
    assert not wedge_below(c, complex(0, 0.2))


def test_regions(params):
    # 0 lies in T + a once -a is inside the downward cone T
    r = RegionSpec("R_eps_a", -0.2, 2 * params.cb, 1, params.b)
    assert region_contains(r, ANPointC(0, 0, 1))
    lam = 0.2
    assert not region_contains(r, ANPointC(1j * lam * params.b, 0, 1))
    r5 = RegionSpec("R_a", -0.2, 0j, 1, params.b)
    rng = np.random.default_rng(3)
    for z in rng.normal(size=20) + 1j * rng.normal(size=20) * 0.3:
        assert region_contains(r5, ANPointC(z, 0, 1)) == region_contains(r5, ANPointC(-z, 0, 1))


@pytest.mark.parametrize("N", [1, 3])
def test_gaussian_integral(N):
    p = DilogParams(N, complex(math.cos(math.pi / 6), math.sin(math.pi / 6)))
    c = build_gamma(-1e-9, complex(0, -1e-9 * p.b.real / p.sqrtN), 12.0, p)

    def f(y, k):
        return np.exp(-np.pi * y * y) * np.ones_like(k)

    res = quadrature(f, c, 1e-10, rates=(1e3, 1e3))
    assert abs(res.value - math.sqrt(N)) < 1e-10
    assert res.error < 1e-10


def test_budget_not_met(params):
    c = build_gamma(-0.5, 0j, 5.0, params)
    with pytest.raises(QuadratureError):
        quadrature(lambda y, k: np.exp(40j * y * y), c, 1e-14, rates=(1e-3, 1e-3), max_panels=8)
