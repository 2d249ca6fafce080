"""Weil-Gel'fand-Zak transform and the operator correspondence."""

import math

import mpmath as mp
import numpy as np
import pytest

from complexaj.wgz import (
    GaussianMember,
    QuantParams,
    an_norm,
    check_quasi_periodicity,
    gaussian_family,
    q_formulas,
    section_norm,
    verify_an_correspondence,
    verify_lemma_relations,
    wgz_forward,
    wgz_check,
)


def test_theta_oracle():
    s = wgz_forward(lambda x, n: np.exp(-np.pi * x * x), 1, M=8, grid=32)
    g = np.arange(32) / 32
    worst = 0.0
    for i in range(0, 32, 5):
        for j in range(0, 32, 7):
            u, v = g[i], g[j]
            theta = mp.jtheta(3, mp.pi * (v + 1j * u), mp.exp(-mp.pi))
            ref = complex(mp.exp(1j * mp.pi * u * v - mp.pi * u * u) * theta)
            worst = max(worst, abs(s.values[i, j] - ref))
    assert worst < 1e-10


def test_truncation_detected():
    with pytest.raises(ValueError, match="truncation"):
        wgz_forward(lambda x, n: np.exp(-0.01 * x * x), 1, M=2, grid=16)


@pytest.mark.parametrize("N", [1, 3])
def test_isometry(N):
    for f in gaussian_family(N):
        assert abs(section_norm(wgz_forward(f, N)) - an_norm(f)) < 1e-6 * an_norm(f)


def test_quasi_periodicity():
    for f in gaussian_family(1):
        assert check_quasi_periodicity(f, 1) < 1e-10


def test_lemma_relations():
    for f in gaussian_family(1):
        assert max(verify_lemma_relations(f).values()) < 1e-8


def test_correspondence():
    rep = verify_an_correspondence(QuantParams(1, 1.0))
    assert rep["mhat"] < 1e-6 and rep["lhat"] < 1e-6 and rep["commutator"] < 1e-6


def test_quant_params():
    qp = QuantParams(1, 1.0)
    assert abs(qp.b - np.exp(-1j * math.pi / 4)) < 1e-14
    assert abs(qp.q_b - qp.q_t) < 1e-12
    assert q_formulas(10, seed=0)["max_q_gap"] < 1e-12


def test_wgz_check_passes():
    rep = wgz_check(1, 1.0)
    assert rep["passed"]
    assert rep["isometry"] < 1e-6
