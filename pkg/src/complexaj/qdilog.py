"""Gaussians, Fourier kernels and the level-N quantum dilogarithm on A_N^C.

Two evaluation routes are provided.

``product``
    For Im(b^2) > 0 the dilogarithm factors into two convergent
    q-Pochhammer symbols, one per difference equation::

        D(x, n) = (s u; Q)_inf / (s' P u'; P)_inf

    with ``u = exp(2 pi b x / sqrt N + 2 pi i n / N)``,
    ``u' = exp(2 pi conj(b) x / sqrt N - 2 pi i n / N)``,
    ``s = exp(pi i (b^2 + 1) / N)``, ``Q = s^2``,
    ``s' = exp(pi i (conj(b)^2 + 1) / N)`` and ``P = s'^(-2)``.  At N = 1
    this is Faddeev's product formula.  Works for every odd N.

``integral``
    N = 1 only.  Faddeev's integral representation on the strip
    ``|Im x| < Re b``, evaluated by adaptive quadrature, then carried to
    any x by the b-shift difference equation.  Slow, and used mostly as an
    independent oracle for the product route.

Everything is computed in log space, so huge or tiny values near the
asymptotic sectors do not overflow.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

__all__ = [
    "DilogParams",
    "ANPointC",
    "PoleError",
    "gaussian",
    "log_gaussian",
    "fourier_kernel",
    "dilog",
    "log_dilog",
    "phi",
    "log_phi",
    "pole_zero_locus",
    "in_triangle",
    "selftest",
]

DEFAULT_B = cmath.exp(1j * math.pi / 6)


class PoleError(ValueError):
    """Evaluation point within the guard radius of a pole."""

    def __init__(self, msg: str, pole):
        super().__init__(msg)
        self.pole = pole


@dataclass(frozen=True)
class DilogParams:
    N: int = 1
    b: complex = DEFAULT_B
    guard: float = 1e-6
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        N, b = int(self.N), complex(self.b)
        if N < 1 or N % 2 == 0:
            raise ValueError(f"level N must be an odd positive integer, got {self.N}")
        if abs(abs(b) - 1) > 1e-14:
            raise ValueError(f"|b| must be 1, got {abs(b)!r}")
        if b.real <= 0 or b.imag < 0:
            raise ValueError("need Re(b) > 0 and Im(b) >= 0")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "b", b)
        if b.imag == 0:
            object.__setattr__(self, "flags", ("real-b: T degenerates, product route unavailable",))

    @property
    def sqrtN(self) -> float:
        return math.sqrt(self.N)

    @property
    def cb(self) -> complex:
        return 1j * self.b.real

    @property
    def qhalf(self) -> complex:
        return -cmath.exp(1j * math.pi * (self.b**2 + 1) / self.N)

    @property
    def q(self) -> complex:
        return self.qhalf**2

    @property
    def zeta_inv(self) -> complex:
        return cmath.exp(1j * math.pi * (self.N + 2 * self.cb**2 / self.N) / 6)

    @property
    def log_zeta_inv(self) -> complex:
        return 1j * math.pi * (self.N + 2 * self.cb**2 / self.N) / 6

    def shift_b(self) -> complex:
        """The x-shift ``i b / sqrt N`` that goes with ``n -> n + 1``."""
        return 1j * self.b / self.sqrtN


@dataclass(frozen=True)
class ANPointC:
    """A point ``(x, n)`` of C x Z/NZ; ``n`` is stored reduced."""

    x: complex
    n: int = 0
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "n", int(self.n) % int(self.N))

    def __neg__(self):
        return ANPointC(-self.x, -self.n, self.N)

    def __add__(self, other):
        if isinstance(other, ANPointC):
            _same_level(self, other)
            return ANPointC(self.x + other.x, self.n + other.n, self.N)
        return ANPointC(self.x + other, self.n, self.N)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ANPointC) else -other)


def _same_level(p, r):
    if p.N != r.N:
        raise ValueError(f"points live on different levels: N={p.N} and N={r.N}")


# -- Gaussians and kernels --------------------------------------------------

def log_gaussian(x, n, N: int = 1):
    """log <(x, n)> = pi i x^2 - pi i n (n + N) / N, vectorized."""
    x = np.asarray(x, dtype=complex)
    n = np.asarray(n)
    return 1j * np.pi * x * x - 1j * np.pi * n * (n + N) / N


def gaussian(p: ANPointC) -> complex:
    return complex(np.exp(log_gaussian(p.x, p.n, p.N)))


def fourier_kernel(p: ANPointC, r: ANPointC) -> complex:
    _same_level(p, r)
    return cmath.exp(2j * math.pi * p.x * r.x) * cmath.exp(-2j * math.pi * p.n * r.n / p.N)


# -- poles and zeros ---------------------------------------------------------

def _lattice_coords(x, params: DilogParams):
    """Real (alpha, beta) with ``sqrt(N) x + c_b = -(i alpha b + i beta conj(b))``."""
    ib, ibb = 1j * params.b, 1j * params.b.conjugate()
    z = -(np.asarray(x, dtype=complex) * params.sqrtN + params.cb)
    det = ib.real * ibb.imag - ib.imag * ibb.real
    alpha = (z.real * ibb.imag - z.imag * ibb.real) / det
    beta = (ib.real * z.imag - ib.imag * z.real) / det
    return alpha, beta


def in_triangle(x, params: DilogParams):
    """Membership in T: below both lines ``-c_b/sqrt N + i R b`` and ``+ i R conj(b)``.

    Closed, with a 1e-12 tolerance on the boundary.
    """
    alpha, beta = _lattice_coords(x, params)
    return (alpha >= -1e-12) & (beta >= -1e-12)


def pole_zero_locus(params: DilogParams, alpha_max: int, beta_max: int) -> list:
    """Pairs ``(zero p_ab, pole -p_ab)`` of phi for ``0 <= a <= alpha_max``, ``0 <= b <= beta_max``."""
    if alpha_max < 0 or beta_max < 0:
        raise ValueError("bounds must be non-negative")
    out = []
    b, bb, N = params.b, params.b.conjugate(), params.N
    for a in range(alpha_max + 1):
        for c in range(beta_max + 1):
            z = ANPointC(-(params.cb + 1j * a * b + 1j * c * bb) / params.sqrtN, a - c, N)
            out.append((z, -z))
    return out


def _check_poles(x, n, params: DilogParams):
    """Raise PoleError if some (x, n) is within the guard radius of a pole of D.

    D(x, n) = phi(x, -n) has its poles at
    ``x = (c_b + i a b + i c conj(b)) / sqrt N`` with ``n = a - c (mod N)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    n = np.broadcast_to(np.asarray(n), x.shape) % params.N
    alpha, beta = _lattice_coords(-x, params)
    for da in (0, 1):
        for dc in (0, 1):
            a = np.floor(alpha) + da
            c = np.floor(beta) + dc
            lat = (params.cb + 1j * a * params.b + 1j * c * params.b.conjugate()) / params.sqrtN
            bad = (a >= 0) & (c >= 0) & (((a - c) % params.N) == n) & (np.abs(x - lat) < params.guard)
            if bad.any():
                i = int(np.argmax(bad))
                raise PoleError(
                    f"point {x[i]!r} lies within {params.guard:g} of a pole",
                    (complex(lat[i]), int(n[i])),
                )


# -- product route -----------------------------------------------------------

def _log_poch(logz, logq: complex, tol_log: float = -40.0):
    """sum_k log(1 - exp(logz + k logq)) for Re(logq) < 0, vectorized in logz.

    Branches are irrelevant: callers exponentiate.  Terms with
    ``|z q^k| > 1`` use ``log(-w) + log1p(-1/w)`` so nothing overflows.
    """
    logz = np.asarray(logz, dtype=complex)
    rq = logq.real
    top = max(float(np.max(logz.real, initial=0.0)), 0.0)
    K = int(math.ceil((top - tol_log) / -rq)) + 1
    k = np.arange(K)
    t = logz[..., None] + k * logq
    big = t.real > 0
    w = np.exp(np.where(big, -t, t))
    small = np.log1p(-w)
    large = t + 1j * np.pi + np.log1p(-w)
    return np.where(big, large, small).sum(axis=-1)


def _log_dilog_product(x, n, params: DilogParams):
    if params.b.imag <= 0:
        raise ValueError("product route needs Im(b^2) > 0")
    N, b, rt = params.N, params.b, params.sqrtN
    bb = b.conjugate()
    x = np.asarray(x, dtype=complex)
    n = np.asarray(n)
    log_s = 1j * np.pi * (b * b + 1) / N
    log_Q = 2 * log_s
    log_u = 2 * np.pi * b * x / rt + 2j * np.pi * n / N
    log_s2 = 1j * np.pi * (bb * bb + 1) / N
    log_P = -2 * log_s2
    log_u2 = 2 * np.pi * bb * x / rt - 2j * np.pi * n / N
    return _log_poch(log_s + log_u, log_Q) - _log_poch(log_s2 + log_P + log_u2, log_P)


# -- integral route (N = 1) ---------------------------------------------------

def _log_faddeev_strip(z: complex, b: complex, delta: float = 0.5) -> complex:
    """Faddeev's integral for log Phi_b(z), |Im z| < Re b.

    Contour R + i*delta, passing above the double pole at 0 and below the
    first poles at i*pi*b^{+-1}.
    """
    def f(t):
        w = t + 1j * delta
        return cmath.exp(-2j * z * w) / (4 * cmath.sinh(w * b) * cmath.sinh(w / b) * w)

    # the integrand decays like exp(-(2 Re b - 2 |Im z|) |t|); cut where it is < 1e-20
    rate = 2 * b.real - 2 * abs(z.imag)
    T = (46.0 + 2 * abs(z.real) * delta) / rate
    opts = dict(limit=2000, epsabs=1e-15, epsrel=1e-13, points=[0.0])
    with warnings.catch_warnings():
        # quadpack flags roundoff once it hits the double-precision floor
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: f(t).real, -T, T, **opts)[0]
        im = integrate.quad(lambda t: f(t).imag, -T, T, **opts)[0]
    return complex(re, im)


def _log_dilog_integral(x: complex, params: DilogParams) -> complex:
    if params.N != 1:
        raise NotImplementedError("integral route is implemented for N = 1 only")
    b = params.b
    s = cmath.exp(1j * math.pi * (b * b + 1))
    step = 1j * b
    half = b.real / 2
    acc = 0j
    z = complex(x)
    guard = 0
    while z.imag > half:
        z -= step
        acc -= cmath.log(1 - s * cmath.exp(2 * math.pi * b * z))
        guard += 1
        if guard > 10_000:
            raise RuntimeError("difference-equation extension did not terminate")
    while z.imag < -half:
        acc += cmath.log(1 - s * cmath.exp(2 * math.pi * b * z))
        z += step
        guard += 1
        if guard > 10_000:
            raise RuntimeError("difference-equation extension did not terminate")
    return acc + _log_faddeev_strip(z, b)


# -- public evaluation -------------------------------------------------------

def log_dilog(x, n, params: DilogParams, method: str = "product"):
    """log D_b(x, n), vectorized for the product route.

    The imaginary part is defined modulo 2 pi.
    """
    _check_poles(x, n, params)
    if method == "product":
        out = _log_dilog_product(x, n, params)
        return complex(out) if np.ndim(out) == 0 else out
    if method == "integral":
        xs = np.asarray(x, dtype=complex)
        if xs.ndim == 0:
            return _log_dilog_integral(complex(xs), params)
        return np.array([_log_dilog_integral(complex(v), params) for v in xs.ravel()]).reshape(xs.shape)
    raise ValueError(f"unknown method {method!r}")


def dilog(p: ANPointC, params: DilogParams, method: str = "product") -> complex:
    if p.N != params.N:
        raise ValueError("point and parameters have different levels")
    return complex(np.exp(log_dilog(p.x, p.n, params, method)))


def log_phi(x, n, params: DilogParams, method: str = "product"):
    """log phi_b(x, n) = log D_b(x, -n)."""
    return log_dilog(x, -np.asarray(n), params, method)


def phi(p: ANPointC, params: DilogParams, method: str = "product") -> complex:
    return dilog(ANPointC(p.x, -p.n, p.N), params, method)


# -- oracle suite ------------------------------------------------------------

def _stats(r):
    r = np.asarray(r, dtype=float)
    return {"max": float(r.max()), "median": float(np.median(r)), "count": int(r.size)}


def selftest(params: DilogParams | None = None, *, points: int = 100, seed: int = 0,
             method: str = "product", radius: float = 40.0) -> dict:
    """Functional-equation residuals of the chosen realization.

    Covers both difference equations, inversion, unitarity, and both
    asymptotic sectors.  Returns a JSON-ready dict with max/median per suite.
    """
    params = params or DilogParams()
    rng = np.random.default_rng(seed)
    N, b, rt = params.N, params.b, params.sqrtN
    bb = b.conjugate()
    width = b.real / (2 * rt)
    xs = rng.uniform(-2, 2, points) + 1j * rng.uniform(-width, width, points) * 0.999
    ns = rng.integers(0, N, points)

    def L(x, n):
        return log_dilog(x, n, params, method)

    res: dict = {}
    # difference equations, both signs of both shifts
    out_b, out_bb = [], []
    for sg in (1, -1):
        lhs = L(xs + sg * 1j * b / rt, ns + sg)
        fac = 1 - np.exp(sg * 1j * np.pi * (b * b + 1) / N + 2 * np.pi * b * xs / rt + 2j * np.pi * ns / N)
        out_b.append(np.abs(np.exp(lhs - L(xs, ns) + sg * np.log(fac)) - 1))
        lhs = L(xs + sg * 1j * bb / rt, ns - sg)
        fac = 1 - np.exp(sg * 1j * np.pi * (bb * bb + 1) / N + 2 * np.pi * bb * xs / rt - 2j * np.pi * ns / N)
        out_bb.append(np.abs(np.exp(lhs - L(xs, ns) + sg * np.log(fac)) - 1))
    res["difference_b"] = _stats(np.concatenate(out_b))
    res["difference_bbar"] = _stats(np.concatenate(out_bb))
    inv = np.exp(L(xs, ns) + L(-xs, -ns) + params.log_zeta_inv - log_gaussian(xs, ns, N))
    res["inversion"] = _stats(np.abs(inv - 1))
    uni = np.exp(np.conj(L(xs, ns)) + L(np.conj(xs), ns))
    res["unitarity"] = _stats(np.abs(uni - 1))
    # asymptotic sectors at |x| = radius, margin of pi/12 inside each sector
    argb = cmath.phase(b)
    margin = math.pi / 12
    th_out = rng.uniform(math.pi / 2 + argb + margin, math.pi, points) * rng.choice([-1, 1], points)
    th_in = rng.uniform(-(math.pi / 2 - argb - margin), math.pi / 2 - argb - margin, points)
    xo, xi = radius * np.exp(1j * th_out), radius * np.exp(1j * th_in)
    res["asymptotic_outer"] = _stats(np.abs(np.exp(L(xo, ns)) - 1))
    res["asymptotic_inner"] = _stats(
        np.abs(np.exp(L(xi, ns) + params.log_zeta_inv - log_gaussian(xi, ns, N)) - 1))
    d0 = np.exp(2 * L(0.0, 0))
    res["fixed_point"] = {"D0_squared": [float(d0.real), float(d0.imag)],
                          "residual": float(abs(d0 * params.zeta_inv - 1))}
    res["params"] = {"N": N, "b": [b.real, b.imag], "method": method, "points": points,
                     "seed": seed, "radius": radius}
    if params.flags:
        res["params"]["flags"] = list(params.flags)
        warnings.warn(params.flags[0])
    return res
