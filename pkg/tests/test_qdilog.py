"""Gaussians, Fourier kernels and the level-N quantum dilogarithm."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from complexaj.qdilog import ANPointC, DilogParams, PoleError, dilog, fourier_kernel, gaussian, pole_zero_locus, selftest

B = cmath.exp(1j * math.pi / 6)


def test_params_invariants(params):
    assert abs(abs(params.b) - 1) < 1e-14
    g = gaussian(ANPointC(1j * params.b / params.sqrtN, -1, params.N))
    assert abs(params.qhalf - 1 / g) < 1e-12


def test_params_reject_bad_b():
    with pytest.raises(ValueError):
        DilogParams(1, 2 * B)
    with pytest.raises(ValueError):
        DilogParams(2, B)


def test_gaussian_values():
    assert gaussian(ANPointC(0, 0, 1)) == 1
    for N in (1, 3, 5):
        assert abs(gaussian(ANPointC(1, 0, N)) + 1) < 1e-14


def test_gaussian_level3():
    x = 0.3 + 0.1j
    direct = cmath.exp(1j * math.pi * x * x) * cmath.exp(-1j * math.pi * 1 * 4 / 3)
    assert abs(gaussian(ANPointC(x, 1, 3)) - direct) < 1e-14


def test_fourier_kernel():
    p = ANPointC(1j * B, -1, 1)
    assert abs(fourier_kernel(p, p) - cmath.exp(-2j * math.pi * B * B)) < 1e-12
    assert fourier_kernel(ANPointC(0.7 - 0.2j, 0, 1), ANPointC(0, 0, 1)) == 1
    with pytest.raises(ValueError):
        fourier_kernel(ANPointC(0, 0, 1), ANPointC(0, 0, 3))


@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3), st.integers(0, 2), st.integers(0, 2))
def test_fourier_kernel_symmetric(x, y, n, m):
    p, r = ANPointC(x, n, 3), ANPointC(y, m, 3)
    assert fourier_kernel(p, r) == pytest.approx(fourier_kernel(r, p), rel=1e-12, abs=1e-300)


def test_faddeev_integral_oracle(params, frozen):
    for e in frozen["faddeev_N1"]:
        ref = complex(*e["value"])
        for method in ("product", "integral"):
            assert abs(dilog(ANPointC(complex(*e["x"]), 0, 1), params, method) - ref) < 1e-12 * abs(ref)


def test_level3_oracle(frozen):
    p = DilogParams(3, B)
    for e in frozen["level3"]:
        ref = complex(*e["value"])
        assert abs(dilog(ANPointC(complex(*e["x"]), e["n"], 3), p) - ref) < 1e-12 * abs(ref)


def test_fixed_point(params):
    d0 = dilog(ANPointC(0, 0, 1), params)
    assert abs(d0 * d0 - 1 / params.zeta_inv) < 1e-13
    # the integral route fixes the sign of the root
    assert abs(d0 - dilog(ANPointC(0, 0, 1), params, "integral")) < 1e-13


def test_unitarity_on_real_line(params):
    for x in np.linspace(-3, 3, 13):
        assert abs(abs(dilog(ANPointC(x, 0, 1), params)) - 1) < 1e-12


@pytest.mark.parametrize("N", [1, 3])
def test_selftest_suites(N):
    res = selftest(DilogParams(N, B), points=100, seed=1)
    for k in ("difference_b", "difference_bbar", "inversion", "unitarity"):
        assert res[k]["max"] < 1e-9, k
    for k in ("asymptotic_outer", "asymptotic_inner"):
        assert res[k]["max"] < 1e-6, k


def test_pole_raises(params):
    zero, pole = pole_zero_locus(params, 1, 1)[0]
    with pytest.raises(PoleError):
        dilog(pole, params)
