"""State integrands, chi, J and the annihilation checks."""

import cmath
import math

import numpy as np
import pytest

from complexaj.contour import ContourError, build_gamma
from complexaj.invariants import (
    admissible,
    annihilator,
    apply_operator,
    auto_contour,
    check_integrand_annihilation,
    check_invariant_annihilation,
    chi,
    choose_eps_sign,
    contour_independence,
    decay_rates,
    fit_decay,
    integrand,
    invariant_J,
    log_integrand,
    prefactor,
)
from complexaj.qdilog import ANPointC, dilog, gaussian
from complexaj.qweyl import NCPoly, nc_parse


def P(x, n=0):
    return ANPointC(x, n, 1)


def test_fig8_integrand_unimodular_on_reals(params):
    rng = np.random.default_rng(0)
    for x, y in rng.uniform(-2, 2, (10, 2)):
        assert abs(abs(integrand("41", P(x), P(y), params)) - 1) < 1e-12


def test_fig8_integrand_at_diagonal(params):
    x = 0.37
    expected = dilog(P(0), params) / (dilog(P(x), params) * gaussian(P(x)) ** -2)
    assert abs(integrand("41", P(x), P(x), params) - expected) < 1e-12


def test_five2_integrand_even_in_x(params):
    rng = np.random.default_rng(1)
    for x, y in rng.uniform(-1, 1, (20, 2)):
        assert abs(integrand("52", P(x), P(y), params) - integrand("52", P(-x), P(y), params)) < 1e-12


@pytest.mark.parametrize("knot", ["41", "52"])
def test_integrand_annihilation(params, knot):
    assert check_integrand_annihilation(knot, params)["max_residual"] < 1e-8


def test_perturbed_annihilator_detected(params):
    assert check_integrand_annihilation("41", params, perturb=True)["max_residual"] > 0.1


@pytest.mark.parametrize("knot", ["41", "52"])
def test_fitted_decay_matches_closed_form(params, knot):
    c = auto_contour(knot, 0j, params)
    left, right = decay_rates(knot, c.eps, 0j, params)

    def lf(y, k):
        return log_integrand(knot, 0j, 0, y, k, params)

    fl, fr = fit_decay(lf, c.baseline, 1)
    assert fl == pytest.approx(left, rel=1e-3)
    assert fr == pytest.approx(right, rel=1e-3)


def test_eps_sign(params):
    for knot in ("41", "52"):
        assert choose_eps_sign(knot, 0j, params)["chosen_sign"] == -1


@pytest.mark.parametrize("knot", ["41", "52"])
def test_chi_anchor(params, frozen, knot):
    ref = complex(*frozen["chi_x0"][knot]["value"])
    r = chi(knot, P(0), params, 1e-8)
    assert abs(r.value - ref) < 1e-8 * r.scale
    assert r.quad.error < 1e-8 * r.scale


def test_chi_on_frozen_contour(params, frozen):
    e = frozen["chi_x0"]["41"]
    c = build_gamma(e["eps"], complex(*e["apex"]), 6.0, params)
    r = chi("41", P(0), params, 1e-9, contour=c)
    assert abs(r.value - complex(*e["value"])) < 1e-9 * r.scale


def test_inadmissible_contour_rejected(params):
    c = build_gamma(-0.5, complex(0, -3.0), 12.0, params)
    assert not admissible("41", 0j, c, params)
    with pytest.raises(ContourError):
        chi("41", P(0), params, contour=c)


def test_five2_chi_even(params):
    for x in (0.15, 0.3):
        a, b = chi("52", P(x), params, 1e-8), chi("52", P(-x), params, 1e-8)
        assert abs(a.value - b.value) < 2e-8 * max(a.scale, b.scale)


def test_small_eps_agrees_with_tent(params):
    straight = build_gamma(-0.05, complex(0, -0.05 * params.b.real), 4.0, params)
    r0 = chi("41", P(0.2), params, 1e-8, contour=straight)
    r1 = chi("41", P(0.2), params, 1e-8)
    assert abs(r0.value - r1.value) < 2e-8 * max(r0.scale, r1.scale)


def test_prefactor(params):
    assert prefactor("41", 0, params) == 1
    x = 0.4
    assert abs(abs(prefactor("41", x, params)) - math.exp(-4 * math.pi * params.b.real * x)) < 1e-14
    shifted = prefactor("41", x - 1j * params.b, params)
    assert abs(shifted / prefactor("41", x, params) - params.q) < 1e-12


def test_J_at_zero(params):
    assert abs(invariant_J("41", P(0), params) - chi("41", P(0), params).value) < 1e-14


def test_operator_action_on_gaussian(params):
    g = lambda x, n: complex(gaussian(ANPointC(x, n, 1)))
    rng = np.random.default_rng(2)
    lhs = nc_parse("lx")
    rhs = nc_parse("q^(-1/2)*mx^-1")
    comm = nc_parse("lx*mx") - nc_parse("q*mx*lx")
    for x in rng.uniform(-1, 1, 10) + 0.1j * rng.uniform(-1, 1, 10):
        a, b = apply_operator(lhs, g, params, P(x)), apply_operator(rhs, g, params, P(x))
        assert abs(a - b) < 1e-12 * abs(a)
        assert abs(apply_operator(comm, g, params, P(x))) < 1e-12 * abs(a)
        mm = apply_operator(NCPoly.gen("mx", 2), g, params, P(x))
        assert abs(mm - apply_operator(NCPoly.gen("mx"), lambda z, n: apply_operator(
            NCPoly.gen("mx"), g, params, ANPointC(z, n, 1)), params, P(x))) < 1e-12 * abs(mm)


@pytest.mark.parametrize("knot", ["41", "52"])
def test_invariant_annihilation_at_zero(params, knot):
    chi_r = check_invariant_annihilation(knot, P(0), params, tol=1e-6)
    assert chi_r["residual"] < 1e-3
    J_r = check_invariant_annihilation(knot, P(0), params, tol=1e-6, target="J")
    assert J_r["residual"] < 1e-3
    ratio = J_r["residual"] / chi_r["residual"]
    assert 0.1 < ratio < 10


def test_annihilator_targets():
    assert annihilator("41", target="chi").is_free_of("my", "ly")
    with pytest.raises(ValueError):
        annihilator("41", target="psi")


def test_contour_independence_small(params):
    assert contour_independence("41", P(0), params, pairs=2, tol=1e-7, seed=5)["passed"]
