"""State integrands, the invariants chi and J, and annihilation checks.

Operators act on functions of one pair ``(x, n)`` or two pairs
``(x, n), (y, k)``.  A normal-ordered monomial ``mx^a lx^b my^c ly^d`` acts
by shifting first and multiplying second::

    (mx^a lx^b f)(x, n) = m(x, n)^a f(x - b i b/sqrt N, n + b)

with ``m(x, n) = exp(-2 pi b x / sqrt N + 2 pi i n / N)``.  Coefficients
in ``Z[v, 1/v]`` are evaluated at ``v = q^(1/2)`` of the parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .contour import (
    ContourError,
    ContourSpec,
    QuadResult,
    RegionSpec,
    build_gamma,
    height_for_tail,
    l1_norm,
    quadrature,
    region_contains,
    triangle_apex,
    wedge_below,
)
from .elimination import KNOTS, load_knot
from .qdilog import ANPointC, DilogParams, log_gaussian, log_phi
from .qweyl import NCPoly, nc_substitute_ly

__all__ = [
    "knot_id",
    "log_integrand",
    "integrand",
    "pole_wedges",
    "decay_rates",
    "fit_decay",
    "choose_eps_sign",
    "admissible",
    "auto_contour",
    "ChiResult",
    "chi",
    "prefactor",
    "invariant_J",
    "multiplier",
    "operator_terms",
    "apply_operator",
    "annihilator",
    "check_integrand_annihilation",
    "check_invariant_annihilation",
    "region_for",
    "random_contour",
    "contour_independence",
]


def knot_id(knot) -> str:
    key = KNOTS.get(str(knot))
    if key is None:
        raise KeyError(f"unknown knot {knot!r}; expected one of 41, 52")
    return key


# -- integrands --------------------------------------------------------------

def log_integrand(knot, x, n, y, k, params: DilogParams):
    """log of the state integrand, vectorized in every argument."""
    key = knot_id(knot)
    N = params.N
    if key == "fig8":
        d = np.asarray(x) - np.asarray(y)
        dn = np.asarray(n) - np.asarray(k)
        return (log_phi(d, dn, params) - 2 * log_gaussian(d, dn, N)
                - log_phi(y, k, params) + 2 * log_gaussian(y, k, N))
    x, y = np.asarray(x), np.asarray(y)
    n, k = np.asarray(n), np.asarray(k)
    return (log_gaussian(y, k, N) - log_gaussian(x, n, N)
            - log_phi(y + x, k + n, params) - log_phi(y, k, params) - log_phi(y - x, k - n, params))


def integrand(knot, x: ANPointC, y: ANPointC, params: DilogParams) -> complex:
    return complex(np.exp(log_integrand(knot, x.x, x.n, y.x, y.n, params)))


# -- contours for chi --------------------------------------------------------

def pole_wedges(knot, x: complex, params: DilogParams) -> list:
    """Apexes of the downward wedges holding the y-poles of the integrand."""
    base = triangle_apex(params)
    if knot_id(knot) == "fig8":
        return [base, base + x]
    return [base - x, base, base + x]


def decay_rates(knot, eps: float, x: complex, params: DilogParams) -> tuple:
    """Exponential decay rates of |integrand| along ``R + i eps b/sqrt N``.

    With ``x = xi + i lam b/sqrt N``, 4_1 decays like
    ``exp(2 pi (eps + lam) Re b eta / sqrt N)`` on the left and
    ``exp(-2 pi (2 lam - eps) Re b eta / sqrt N)`` on the right; 5_2 like
    ``exp(2 pi eps Re b eta / sqrt N)`` and ``exp(4 pi eps Re b eta / sqrt N)``.
    A non-positive rate means no decay.
    """
    rb = params.b.real / params.sqrtN
    lam = complex(x).imag * params.sqrtN / params.b.real
    if knot_id(knot) == "fig8":
        return (-2 * math.pi * (eps + lam) * rb, 2 * math.pi * (2 * lam - eps) * rb)
    return (-2 * math.pi * eps * rb, -4 * math.pi * eps * rb)


def fit_decay(f: Callable, height: float, N: int, *, start: float = 6.0, stop: float = 12.0) -> tuple:
    """Least-squares decay rates of ``log|f|`` on the horizontal line at ``height``.

    Samples ``[start, stop]`` on each side in every class and returns the
    worst (smallest) rate per side.
    """
    t = np.linspace(start, stop, 13)
    rates = []
    for sign in (-1, 1):
        worst = math.inf
        for n in range(N):
            vals = np.real(np.asarray(f(sign * t + 1j * height, n)))
            slope = np.polyfit(t, vals, 1)[0]
            worst = min(worst, -slope)
        rates.append(worst)
    return tuple(rates)


def choose_eps_sign(knot, x: complex, params: DilogParams, magnitude: float = 0.5) -> dict:
    """Fit the decay on both candidate baselines ``eps = +-magnitude``.

    Returns the fitted rates and the sign giving decay on both sides.
    """
    rb = params.b.real / params.sqrtN
    xc = complex(x)
    fitted = {}
    for eps in (magnitude, -magnitude):
        def lf(y, k):
            return log_integrand(knot, xc, 0, y, k, params)
        fitted[eps] = fit_decay(lf, eps * rb, params.N)
    good = [e for e, r in fitted.items() if min(r) > 0]
    return {
        "fitted": {str(e): list(r) for e, r in fitted.items()},
        "chosen_sign": (-1 if good == [-magnitude] else 1 if good == [magnitude] else 0),
    }


def admissible(knot, x: complex, c: ContourSpec, params: DilogParams, margin: float = 0.0) -> bool:
    """All pole wedges strictly below ``c`` and decay on both tails."""
    if not all(wedge_below(c, w, margin) for w in pole_wedges(knot, x, params)):
        return False
    return min(decay_rates(knot, c.eps, x, params)) > 0


def _eps_max(knot, x: complex, params: DilogParams) -> float:
    lam = complex(x).imag * params.sqrtN / params.b.real
    if knot_id(knot) == "fig8":
        return min(-lam, 2 * lam)
    return 0.0


def auto_contour(knot, x: complex, params: DilogParams, *, eps: float | None = None,
                 gap: float = 0.5, H: float | None = None) -> ContourSpec:
    """An admissible tent for ``chi(x)``.

    ``eps`` defaults to ``gap`` below the decay threshold.  ``H`` defaults
    to the smallest height that fits the detour; :func:`chi` then raises it
    to meet the tail budget.  The apex sits
    ``gap * Re b/sqrt N`` above every wedge it must clear; if the baseline
    already clears them the contour is straight.
    """
    x = complex(x)
    if eps is None:
        eps = min(_eps_max(knot, x, params) - gap, -gap)
    rb = params.b.real / params.sqrtN
    h0 = eps * rb
    slope = params.b.real / params.b.imag
    wedges = pole_wedges(knot, x, params)
    lift = gap * rb
    if max(w.imag for w in wedges) + lift < h0:
        apex = complex(0.0, h0)
    else:
        # lowest point clearing every wedge: a vertex of max_w (w.imag + slope |re - w.real|)
        cands = [w.real for w in wedges]
        cands += [(v.imag - w.imag + slope * (w.real + v.real)) / (2 * slope) for w in wedges for v in wedges]

        def need(re):
            return max(w.imag + slope * abs(w.real - re) for w in wedges)

        re = min(cands, key=lambda r: (need(r), abs(r)))
        apex = complex(re, max(need(re) + lift, h0 + lift))
    span = abs(apex.imag - h0) / slope + abs(apex.real)
    c = build_gamma(eps, apex, span if H is None else max(H, span), params)
    if not admissible(knot, x, c, params):
        raise ContourError(f"no admissible contour found for x={x}")
    return c


def random_contour(knot, x: complex, params: DilogParams, rng: np.random.Generator,
                   *, attempts: int = 200) -> ContourSpec:
    """A random admissible tent: jittered offset, apex and height."""
    x = complex(x)
    rb = params.b.real / params.sqrtN
    top = min(_eps_max(knot, x, params), 0.0)
    base = auto_contour(knot, x, params)
    for _ in range(attempts):
        eps = top - rng.uniform(0.1, 1.5)
        apex = base.apex + complex(rng.uniform(-0.5, 0.5), rb * rng.uniform(-0.3, 1.0))
        slope = params.b.real / params.b.imag
        span = abs(apex.imag - eps * rb) / slope + abs(apex.real)
        try:
            c = build_gamma(eps, apex, span * rng.uniform(1.0, 2.0) + 1e-9, params)
        except ContourError:
            continue
        if admissible(knot, x, c, params):
            return c
    raise ContourError(f"no random admissible contour after {attempts} attempts")


def contour_independence(knot, x: ANPointC, params: DilogParams | None = None, *, pairs: int = 5,
                         tol: float = 1e-6, seed: int = 0) -> dict:
    """chi on random pairs of admissible contours.

    Each pair passes when ``|chi_1 - chi_2| < 2 tol max(scale)``, where the
    scales are the L1 norms that :func:`chi` measures its tolerance against.
    """
    params = params or DilogParams()
    key = knot_id(knot)
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(pairs):
        r1, r2 = (chi(key, x, params, tol, contour=random_contour(key, x.x, params, rng)) for _ in range(2))
        bound = 2 * tol * max(r1.scale, r2.scale)
        diff = abs(r1.value - r2.value)
        rows.append({"contours": [r1.contour.to_json(), r2.contour.to_json()],
                     "values": [[r1.value.real, r1.value.imag], [r2.value.real, r2.value.imag]],
                     "difference": diff, "bound": bound, "passed": bool(diff < bound)})
    return {"knot": key, "x": [complex(x.x).real, complex(x.x).imag], "n": x.n, "tol": tol,
            "pairs": rows, "max_ratio": max(r["difference"] / r["bound"] for r in rows),
            "passed": all(r["passed"] for r in rows)}


def region_for(knot, eps: float, a: complex, params: DilogParams) -> RegionSpec:
    kind = "R_eps_a" if knot_id(knot) == "fig8" else "R_a"
    return RegionSpec(kind, eps, complex(a), params.N, params.b)


# -- chi and J ---------------------------------------------------------------

@dataclass
class ChiResult:
    knot: str
    x: complex
    n: int
    value: complex
    quad: QuadResult
    contour: ContourSpec
    scale: float = 1.0

    def to_json(self) -> dict:
        return {
            "knot": self.knot,
            "x": [self.x.real, self.x.imag],
            "n": self.n,
            "value": [self.value.real, self.value.imag],
            "quad": self.quad.to_json(),
            "contour": self.contour.to_json(),
            "scale": self.scale,
        }


def chi(knot, x: ANPointC, params: DilogParams, tol: float = 1e-8, *,
        contour: ContourSpec | None = None, strict: bool = True) -> ChiResult:
    """chi_K(x) by quadrature over an admissible contour.

    ``tol`` is relative to the L1 norm of the integrand along the contour;
    shifted arguments make chi grow by many orders of magnitude, so an
    absolute tolerance would sit below roundoff.  Without ``contour`` one
    is chosen by :func:`auto_contour`, and the height is raised until the
    tail bound is below a tenth of the budget.
    """
    key = knot_id(knot)
    xc, n = complex(x.x), x.n
    if contour is None:
        contour = auto_contour(key, xc, params)
    elif not admissible(key, xc, contour, params):
        raise ContourError(f"contour (eps={contour.eps}, apex={contour.apex}) is not admissible at x={xc}")
    rates = decay_rates(key, contour.eps, xc, params)

    def f(y, k):
        return np.exp(log_integrand(key, xc, n, y, k, params))

    scale = l1_norm(f, contour)
    contour = height_for_tail(f, contour, tol * scale, rates)
    res = quadrature(f, contour, tol * scale, rates=rates, strict=strict)
    return ChiResult(key, xc, n, res.value, res, contour, scale)


def prefactor(knot, x, params: DilogParams):
    """``exp(4 pi i c_b x/sqrt N)`` for 4_1 and ``exp(2 pi i c_b x/sqrt N)`` for 5_2."""
    k = 4 if knot_id(knot) == "fig8" else 2
    return np.exp(k * math.pi * 1j * params.cb * np.asarray(x, dtype=complex) / params.sqrtN)


def invariant_J(knot, x: ANPointC, params: DilogParams, tol: float = 1e-8, **kw) -> complex:
    return complex(prefactor(knot, x.x, params)) * chi(knot, x, params, tol, **kw).value


# -- operators ---------------------------------------------------------------

def multiplier(x, n, params: DilogParams):
    """The m-operator's multiplier ``exp(-2 pi b x/sqrt N + 2 pi i n/N)``."""
    return np.exp(-2 * math.pi * params.b * np.asarray(x, dtype=complex) / params.sqrtN
                  + 2j * math.pi * np.asarray(n) / params.N)


def operator_terms(word: NCPoly, f: Callable, params: DilogParams, x: ANPointC,
                   y: ANPointC | None = None) -> list:
    """The contributions of the monomials of ``word`` at the base point(s).

    ``f`` takes ``(x, n)`` or ``(x, n, y, k)``; words without y-generators
    may be applied to one-pair functions.
    """
    s = params.shift_b()
    qh = params.qhalf
    out = []
    for (a, b, c, d), coef in sorted(word.items()):
        if y is None:
            if c or d:
                raise ValueError("word involves y-generators but f has one argument")
            val = multiplier(x.x, x.n, params) ** a * f(x.x - b * s, x.n + b)
        else:
            m = multiplier(x.x, x.n, params) ** a * multiplier(y.x, y.n, params) ** c
            val = m * f(x.x - b * s, x.n + b, y.x - d * s, y.n + d)
        out.append(complex(coef(qh)) * complex(val))
    return out


def apply_operator(word: NCPoly, f: Callable, params: DilogParams, x: ANPointC,
                   y: ANPointC | None = None) -> complex:
    return complex(sum(operator_terms(word, f, params, x, y)))


def _relative(terms) -> float:
    t = np.asarray(terms)
    scale = np.abs(t).max()
    return float(abs(t.sum()) / scale) if scale > 0 else 0.0


def annihilator(knot, *, target: str = "chi", data_dir=None) -> NCPoly:
    """``Â(mx, lx, 1)`` for chi, or ``Â^C`` for J."""
    data = load_knot(knot, data_dir, apply_errata=True)
    p = nc_substitute_ly(data.ahat)
    if target == "chi":
        return p
    if target == "J":
        from .elimination import make_ahat_c

        return make_ahat_c(data.ahat, data.lx_rescale, data.global_scalar)
    raise ValueError(f"target must be 'chi' or 'J', got {target!r}")


def check_integrand_annihilation(knot, params: DilogParams | None = None, *, count: int = 20,
                                 seed: int = 0, perturb: bool = False, data_dir=None) -> dict:
    """Apply g1, g2 to the integrand at random points near the real locus.

    ``perturb`` adds 1 to the first coefficient of g1, which must break the
    identity.
    """
    params = params or DilogParams()
    key = knot_id(knot)
    data = load_knot(key, data_dir)
    words = {"g1": data.g1, "g2": data.g2}
    if perturb:
        mono, coef = sorted(data.g1.items())[0]
        words["g1"] = data.g1 + NCPoly.monomial(mono, 1)
    rng = np.random.default_rng(seed)
    N = params.N

    def f(x, n, y, k):
        return np.exp(log_integrand(key, x, n, y, k, params))

    worst = {name: 0.0 for name in words}
    for _ in range(count):
        x = ANPointC(complex(rng.uniform(-1, 1), rng.uniform(-0.1, 0.1)), int(rng.integers(N)), N)
        y = ANPointC(complex(rng.uniform(-1, 1), rng.uniform(-0.1, 0.1)), int(rng.integers(N)), N)
        for name, w in words.items():
            worst[name] = max(worst[name], _relative(operator_terms(w, f, params, x, y)))
    return {
        "knot": key,
        "count": count,
        "seed": seed,
        "perturbed": perturb,
        "residuals": worst,
        "max_residual": max(worst.values()),
    }


def check_invariant_annihilation(knot, x: ANPointC, params: DilogParams | None = None, *,
                                 tol: float = 1e-6, target: str = "chi", data_dir=None) -> dict:
    """Apply the annihilator to chi (or J) at ``x``, one contour per shifted argument.

    The residual is ``|sum of terms| / max |term|``.
    """
    params = params or DilogParams()
    key = knot_id(knot)
    word = annihilator(key, target=target, data_dir=data_dir)
    cache: dict = {}

    def f(z, n):
        kz = (complex(z), int(n) % params.N)
        if kz not in cache:
            cache[kz] = chi(key, ANPointC(kz[0], kz[1], params.N), params, tol)
        val = cache[kz].value
        if target == "J":
            val *= complex(prefactor(key, kz[0], params))
        return val

    terms = operator_terms(word, f, params, x)
    return {
        "knot": key,
        "target": target,
        "x": [x.x.real, x.x.imag],
        "n": x.n,
        "tol": tol,
        "residual": _relative(terms),
        "terms": len(terms),
        "evaluations": [r.to_json() for r in cache.values()],
    }


def in_region(knot, x: ANPointC, eps: float, a: complex, params: DilogParams) -> bool:
    return bool(region_contains(region_for(knot, eps, a, params), x))
