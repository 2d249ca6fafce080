"""Numerical Weil-Gel'fand-Zak transform and the operator correspondence.

A section of the level-N bundle on the torus is stored on a uniform grid
over [0, 1)^2.  Two phase-stripped forms are periodic and carry all
spectral work:

    F(u, v) = exp(-i pi N u v) s(u, v)    is 1-periodic in v,
    G(u, v) = exp(+i pi N u v) s(u, v)    is 1-periodic in u.

Complex shifts of s are done on F or G by multiplying Fourier
coefficients.  Analytic continuation amplifies FFT noise exponentially, so
coefficients whose amplified noise would matter are dropped first.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import fft

__all__ = [
    "QuantParams",
    "TorusSection",
    "GaussianMember",
    "gaussian_family",
    "wgz_forward",
    "section_norm",
    "an_norm",
    "torus_operator_apply",
    "an_operator_apply",
    "check_quasi_periodicity",
    "verify_lemma_relations",
    "verify_an_correspondence",
    "q_formulas",
    "wgz_check",
]

OPERATORS = ("grad_u", "grad_v", "mult_e2piiu", "mult_e2piiv", "mhat", "lhat")


@dataclass(frozen=True)
class QuantParams:
    """Level ``t = N + iS`` and the derived ``r``, ``b``.

    The branch of ``exp(2rN) = +-sqrt(-conj(t)/t)`` is the one with
    ``Re b > 0`` (``Im exp(2rN) > 0``).
    """

    N: int = 1
    S: float = 1.0

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "S", float(self.S))

    @property
    def t(self) -> complex:
        return complex(self.N, self.S)

    @property
    def e2rN(self) -> complex:
        w = cmath.sqrt(-self.t.conjugate() / self.t)
        return w if w.imag > 0 or (w.imag == 0 and w.real > 0) else -w

    @property
    def r(self) -> complex:
        return cmath.log(self.e2rN) / (2 * self.N)

    @property
    def b(self) -> complex:
        return -1j * self.e2rN

    @property
    def q_b(self) -> complex:
        return cmath.exp(2j * math.pi * (self.b**2 + 1) / self.N)

    @property
    def q_t(self) -> complex:
        return cmath.exp(4j * math.pi / self.t)

    def check(self) -> dict:
        e4 = self.e2rN**2
        return {
            "abs_e4rN_minus_1": abs(abs(e4) - 1),
            "e4rN_t_plus_conj_t": abs(e4 * self.t + self.t.conjugate()),
            "abs_b_minus_1": abs(abs(self.b) - 1),
        }


@dataclass
class TorusSection:
    """Grid samples ``values[i, j] = s(u_i, v_j)`` with ``u_i = i/G``, ``v_j = j/G``."""

    values: np.ndarray
    N: int

    @property
    def grid(self) -> int:
        return self.values.shape[0]

    @property
    def uv(self):
        g = np.arange(self.grid) / self.grid
        return np.meshgrid(g, g, indexing="ij")

    def __sub__(self, other: "TorusSection") -> "TorusSection":
        return TorusSection(self.values - other.values, self.N)

    def scale(self, c) -> "TorusSection":
        return TorusSection(c * self.values, self.N)


# -- test family -------------------------------------------------------------

@dataclass(frozen=True)
class GaussianMember:
    """``f(x, n) = exp(-pi (x - mu)^2 + c x + 2 pi i kappa n / N)``.

    Entire in ``x``, so complex shifts are exact.
    """

    mu: float = 0.0
    c: complex = 0.0
    kappa: int = 0
    N: int = 1

    def __call__(self, x, n):
        x = np.asarray(x, dtype=complex)
        return np.exp(-math.pi * (x - self.mu) ** 2 + self.c * x + 2j * math.pi * self.kappa * np.asarray(n) / self.N)

    def derivative(self, x, n):
        x = np.asarray(x, dtype=complex)
        return (-2 * math.pi * (x - self.mu) + self.c) * self(x, n)

    def norm2(self) -> float:
        """``||f||^2`` on A_N with the normalised measure: ``sqrt(N) * int |f(x,0)|^2 dx``."""
        # |f|^2 = exp(-2 pi (x - mu)^2 + 2 Re(c) x)
        a, c = 2 * math.pi, 2 * complex(self.c).real
        integral = math.sqrt(math.pi / a) * math.exp(c * self.mu + c * c / (4 * a))
        return math.sqrt(self.N) * integral


def gaussian_family(N: int = 1, size: int = 5) -> list:
    base = [
        GaussianMember(0.0, 0.0, 0, N),
        GaussianMember(0.3, 0.0, 0, N),
        GaussianMember(-0.4, 0.5, 0, N),
        GaussianMember(0.1, 0.3 - 0.7j, 1 % N, N),
        GaussianMember(0.6, -0.4 + 0.2j, 2 % N, N),
    ]
    return base[:size]


# -- the transform -----------------------------------------------------------

def _m_range(N: int, M: float):
    """Summation indices with ``|m| / sqrt N <= M + sqrt N``."""
    top = int(math.ceil((M + math.sqrt(N)) * math.sqrt(N)))
    return np.arange(-top, top + 1)


def wgz_forward(f: Callable, N: int = 1, *, M: float = 8.0, grid: int = 256,
                tail_tol: float = 1e-12) -> TorusSection:
    """``s(u, v) = exp(i pi N u v) sum_m f(sqrt N u + m/sqrt N, -m) exp(2 pi i m v)``.

    Raises ValueError if the outermost retained terms exceed ``tail_tol``
    relative to the largest, which means ``M`` is too small.
    """
    g = np.arange(grid) / grid
    ms = _m_range(N, M)
    x = math.sqrt(N) * g[:, None] + ms[None, :] / math.sqrt(N)
    vals = np.asarray(f(x, (-ms[None, :]) % N), dtype=complex)
    peak = np.abs(vals).max()
    edge = max(np.abs(vals[:, 0]).max(), np.abs(vals[:, -1]).max())
    if peak > 0 and edge > tail_tol * peak:
        raise ValueError(f"truncation M={M} too small: edge terms {edge / peak:.2e} of the peak")
    # F(u, v) = sum_m vals[u, m] e^{2 pi i m v}
    phase = np.exp(2j * math.pi * ms[:, None] * g[None, :])
    F = vals @ phase
    s = np.exp(1j * math.pi * N * g[:, None] * g[None, :]) * F
    return TorusSection(s, N)


def section_norm(s: TorusSection) -> float:
    """Grid L2 norm over the torus; |s| is periodic, so the mean is spectrally accurate."""
    return float(math.sqrt(np.mean(np.abs(s.values) ** 2)))


def an_norm(f: GaussianMember) -> float:
    return math.sqrt(f.norm2())


def check_quasi_periodicity(f: Callable, N: int = 1, *, M: float = 8.0, points: int = 16, seed: int = 0) -> float:
    """Max deviation of ``s(u+1, v) e^{N pi i v}`` and ``s(u, v+1) e^{-N pi i u}`` from ``s``.

    Evaluates the transform off the grid, at the seams.
    """
    rng = np.random.default_rng(seed)
    ms = _m_range(N, M)

    def s(u, v):
        x = math.sqrt(N) * u + ms / math.sqrt(N)
        return np.exp(1j * math.pi * N * u * v) * np.sum(f(x, (-ms) % N) * np.exp(2j * math.pi * ms * v))

    worst = 0.0
    for _ in range(points):
        u, v = rng.uniform(0, 1, 2)
        base = s(u, v)
        worst = max(worst,
                    abs(s(u + 1, v) - np.exp(-1j * N * math.pi * v) * base),
                    abs(s(u, v + 1) - np.exp(1j * N * math.pi * u) * base))
    return float(worst)


# -- torus-side operators ----------------------------------------------------

def _freqs(G: int):
    return fft.fftfreq(G, 1.0 / G)


def _continue(coef: np.ndarray, axis: int, c: complex, rtol: float) -> np.ndarray:
    """Multiply Fourier coefficients by ``e^{2 pi i k c}``, dropping unreliable ones.

    The noise level of each line is read off the outer quarter of the
    spectrum.  A coefficient is kept if it stands clearly above that noise
    and its amplified noise stays below ``rtol`` of the largest output
    coefficient.
    """
    G = coef.shape[axis]
    k = _freqs(G)
    shape = [1, 1]
    shape[axis] = G
    log_amp = (-2 * math.pi * k * complex(c).imag).reshape(shape)
    phase = np.exp(2j * math.pi * k * complex(c).real).reshape(shape)
    if complex(c).imag == 0:
        return coef * phase
    mag = np.abs(coef)
    outer = np.abs(k) > 3 * G / 8
    noise = np.take(mag, np.flatnonzero(outer), axis=axis).max(axis=axis, keepdims=True)
    noise = np.maximum(noise, np.finfo(float).eps * mag.max(axis=axis, keepdims=True))
    # compare in logs: the raw amplification overflows for large |k| Im c
    with np.errstate(divide="ignore"):
        log_out = np.log(mag) + log_amp
        log_top = log_out.max(axis=axis, keepdims=True)
        keep = (mag > 10 * noise) & (np.log(noise) + log_amp <= math.log(rtol) + log_top)
    amp = np.exp(np.where(keep, log_amp, 0.0)) * phase
    return np.where(keep, coef * amp, 0)


def _shift_v(s: TorusSection, c: complex, floor: float) -> np.ndarray:
    """``s(u, v + c)`` through the v-periodic form F."""
    u, v = s.uv
    N = s.N
    F = np.exp(-1j * math.pi * N * u * v) * s.values
    coef = _continue(fft.fft(F, axis=1), 1, c, floor)
    F_shift = fft.ifft(coef, axis=1)
    return np.exp(1j * math.pi * N * u * (v + c)) * F_shift


def _shift_u(s: TorusSection, c: complex, floor: float) -> np.ndarray:
    """``s(u + c, v)`` through the u-periodic form G."""
    u, v = s.uv
    N = s.N
    G = np.exp(1j * math.pi * N * u * v) * s.values
    coef = _continue(fft.fft(G, axis=0), 0, c, floor)
    G_shift = fft.ifft(coef, axis=0)
    return np.exp(-1j * math.pi * N * (u + c) * v) * G_shift


def _grad_v(s: TorusSection) -> np.ndarray:
    # s = e^{i pi N u v} F, so grad_v s = e^{i pi N u v} (dF/dv + 2 i pi N u F)
    u, v = s.uv
    N = s.N
    F = np.exp(-1j * math.pi * N * u * v) * s.values
    dF = fft.ifft(2j * math.pi * _freqs(s.grid)[None, :] * fft.fft(F, axis=1), axis=1)
    return np.exp(1j * math.pi * N * u * v) * (dF + 2j * math.pi * N * u * F)


def _grad_u(s: TorusSection) -> np.ndarray:
    # s = e^{-i pi N u v} G, so grad_u s = e^{-i pi N u v} (dG/du - 2 i pi N v G)
    u, v = s.uv
    N = s.N
    G = np.exp(1j * math.pi * N * u * v) * s.values
    dG = fft.ifft(2j * math.pi * _freqs(s.grid)[:, None] * fft.fft(G, axis=0), axis=0)
    return np.exp(-1j * math.pi * N * u * v) * (dG - 2j * math.pi * N * v * G)


def torus_operator_apply(which: str, s: TorusSection, qp: QuantParams | None = None, *,
                         floor: float = 1e-12) -> TorusSection:
    """Apply a torus-side operator to a gridded section.

    ``mhat = e^{2 pi i u} exp(c grad_v)`` and ``lhat = e^{2 pi i v} exp(-c grad_u)``
    with ``c = (e^{2rN} - 1)/N``.  Since u commutes with grad_v,
    ``exp(c grad_v) s = e^{i N pi u c} s(u, v + c)``, and likewise
    ``exp(-c grad_u) s = e^{i N pi v c} s(u - c, v)``.
    """
    if which not in OPERATORS:
        raise ValueError(f"unknown operator {which!r}; expected one of {OPERATORS}")
    u, v = s.uv
    N = s.N
    if which == "grad_u":
        out = _grad_u(s)
    elif which == "grad_v":
        out = _grad_v(s)
    elif which == "mult_e2piiu":
        out = np.exp(2j * math.pi * u) * s.values
    elif which == "mult_e2piiv":
        out = np.exp(2j * math.pi * v) * s.values
    else:
        if qp is None:
            raise ValueError(f"{which} needs QuantParams")
        if qp.N != N:
            raise ValueError("section and parameters have different levels")
        c = (qp.e2rN - 1) / N
        if which == "mhat":
            out = np.exp(2j * math.pi * u) * np.exp(1j * N * math.pi * u * c) * _shift_v(s, c, floor)
        else:
            out = np.exp(2j * math.pi * v) * np.exp(1j * N * math.pi * v * c) * _shift_u(s, -c, floor)
    return TorusSection(out, N)


# -- A_N-side operators ------------------------------------------------------

def an_operator_apply(which: str, f: GaussianMember, qp: QuantParams | None = None) -> Callable:
    """The A_N-side function that each torus operator should correspond to."""
    N = f.N
    rN = math.sqrt(N)
    if which == "grad_u":
        return lambda x, n: rN * f.derivative(x, n)
    if which == "grad_v":
        return lambda x, n: 2j * math.pi * rN * np.asarray(x) * f(x, n)
    if which == "mult_e2piiu":
        return lambda x, n: np.exp(2j * math.pi * np.asarray(x) / rN + 2j * math.pi * np.asarray(n) / N) * f(x, n)
    if which == "mult_e2piiv":
        return lambda x, n: f(np.asarray(x) - 1 / rN, np.asarray(n) + 1)
    if qp is None:
        raise ValueError(f"{which} needs QuantParams")
    b = qp.b
    if which == "mhat":
        return lambda x, n: np.exp(-2 * math.pi * b * np.asarray(x) / rN + 2j * math.pi * np.asarray(n) / N) * f(x, n)
    if which == "lhat":
        return lambda x, n: f(np.asarray(x) - 1j * b / rN, np.asarray(n) + 1)
    raise ValueError(f"unknown operator {which!r}")


def _rel(a: TorusSection, b: TorusSection) -> float:
    scale = np.abs(b.values).max()
    return float(np.abs(a.values - b.values).max() / scale) if scale > 0 else float(np.abs(a.values).max())


def verify_lemma_relations(f: GaussianMember, *, grid: int = 256, M: float = 8.0) -> dict:
    """Max relative grid residual of the four WGZ relations for one member."""
    s = wgz_forward(f, f.N, M=M, grid=grid)
    out = {}
    for which in ("grad_u", "grad_v", "mult_e2piiu", "mult_e2piiv"):
        lhs = torus_operator_apply(which, s)
        rhs = wgz_forward(an_operator_apply(which, f), f.N, M=M, grid=grid)
        out[which] = _rel(lhs, rhs)
    return out


def verify_an_correspondence(qp: QuantParams, family: list | None = None, *, grid: int = 256,
                             M: float = 8.0) -> dict:
    """Torus-side mhat, lhat against the A_N-side actions, plus q-commutativity.

    The commutator is measured twice.  ``commutator`` applies the outer
    torus operator to the transform of the inner A_N-side action, whose
    agreement with the inner torus operator is the ``mhat``/``lhat``
    entry.  ``commutator_direct`` composes the two gridded complex shifts;
    the second continuation amplifies the first one's rounding-level error
    exponentially, so it is reported but not used for the verdict.
    """
    family = family or gaussian_family(qp.N)
    worst = {"mhat": 0.0, "lhat": 0.0, "commutator": 0.0, "commutator_direct": 0.0}
    for f in family:
        s = wgz_forward(f, qp.N, M=M, grid=grid)
        inner = {}
        for which in ("mhat", "lhat"):
            lhs = torus_operator_apply(which, s, qp)
            inner[which] = wgz_forward(an_operator_apply(which, f, qp), qp.N, M=M, grid=grid)
            worst[which] = max(worst[which], _rel(lhs, inner[which]))
        lm = torus_operator_apply("lhat", inner["mhat"], qp)
        ml = torus_operator_apply("mhat", inner["lhat"], qp)
        comm = lm - ml.scale(qp.q_t)
        worst["commutator"] = max(worst["commutator"], section_norm(comm) / section_norm(s))
        with np.errstate(over="ignore", invalid="ignore"):
            lm = torus_operator_apply("lhat", torus_operator_apply("mhat", s, qp), qp)
            ml = torus_operator_apply("mhat", torus_operator_apply("lhat", s, qp), qp)
            direct = section_norm(lm - ml.scale(qp.q_t)) / section_norm(s)
        worst["commutator_direct"] = max(worst["commutator_direct"], float(np.nan_to_num(direct, nan=np.inf)))
    return worst


def q_formulas(count: int = 10, seed: int = 0) -> dict:
    """Largest gap between ``exp(2 pi i (b^2+1)/N)`` and ``e^{4 pi i/t}`` over random levels."""
    rng = np.random.default_rng(seed)
    worst, checks = 0.0, 0.0
    for _ in range(count):
        qp = QuantParams(int(rng.integers(1, 8)), float(rng.uniform(-3, 3)))
        worst = max(worst, abs(qp.q_b - qp.q_t) / abs(qp.q_t))
        checks = max(checks, *qp.check().values())
    return {"max_q_gap": worst, "max_param_check": checks, "count": count, "seed": seed}


def wgz_check(N: int = 1, S: float = 1.0, *, grid: int = 256, M: float = 8.0, tol: float = 1e-6) -> dict:
    """Everything the correspondence criterion asks for, as one report."""
    qp = QuantParams(N, S)
    fam = gaussian_family(N)
    lemma = {k: 0.0 for k in ("grad_u", "grad_v", "mult_e2piiu", "mult_e2piiv")}
    iso = 0.0
    for f in fam:
        for k, val in verify_lemma_relations(f, grid=grid, M=M).items():
            lemma[k] = max(lemma[k], val)
        s = wgz_forward(f, N, M=M, grid=grid)
        iso = max(iso, abs(section_norm(s) - an_norm(f)) / an_norm(f))
    corr = verify_an_correspondence(qp, fam, grid=grid, M=M)
    qf = q_formulas()
    quasi = max(check_quasi_periodicity(f, N, M=M) for f in fam)
    q_here = abs(qp.q_b - qp.q_t) / abs(qp.q_t)
    verdict = (corr["mhat"], corr["lhat"], corr["commutator"])
    passed = (max(lemma.values()) < tol and max(verdict) < tol and iso < tol
              and q_here < 1e-12 and qf["max_q_gap"] < 1e-12 and quasi < 1e-10)
    return {
        "N": N,
        "S": S,
        "grid": grid,
        "M": M,
        "b": [qp.b.real, qp.b.imag],
        "lemma_residuals": lemma,
        "correspondence": corr,
        "isometry": iso,
        "quasi_periodicity": quasi,
        "q_gap": q_here,
        "q_formulas": qf,
        "tol": tol,
        "passed": bool(passed),
    }
