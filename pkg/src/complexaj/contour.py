"""Tent contours, holomorphy regions, and adaptive quadrature along them.

A tent contour runs along the horizontal line ``R + i eps b / sqrt N`` and
detours through an apex ``a`` along the two pole-wedge directions ``i b``
and ``i conj(b)``.  Because these are exactly the edge directions of the
triangles T + x holding the poles, "everything below" reduces to a finite
number of height comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .qdilog import DilogParams, _lattice_coords

__all__ = [
    "ContourError",
    "QuadratureError",
    "ContourSpec",
    "RegionSpec",
    "QuadResult",
    "build_gamma",
    "wedge_below",
    "region_contains",
    "quadrature",
    "gauss_kronrod",
    "height_for_tail",
    "triangle_apex",
    "l1_norm",
]


class ContourError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


# -- contours ----------------------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    """Piecewise-linear contour, identical in every residue class.

    ``vertices`` run left to right; the first and last lie on the baseline
    at real parts ``-H`` and ``+H`` and the tails continue horizontally.
    """

    eps: float
    apex: complex
    H: float
    N: int
    b: complex
    vertices: tuple = field(default=())

    @property
    def baseline(self) -> float:
        return self.eps * self.b.real / math.sqrt(self.N)

    @property
    def segments(self) -> list:
        v = self.vertices
        return [(v[i], v[i + 1]) for i in range(len(v) - 1)]

    def height(self, re):
        """Imaginary part of the contour above the real part ``re``."""
        xs = np.array([z.real for z in self.vertices])
        ys = np.array([z.imag for z in self.vertices])
        re = np.asarray(re, dtype=float)
        return np.where((re < xs[0]) | (re > xs[-1]), self.baseline, np.interp(re, xs, ys))

    def with_height(self, H: float) -> "ContourSpec":
        return build_gamma(self.eps, self.apex, H, DilogParams(self.N, self.b))

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "apex": [self.apex.real, self.apex.imag],
            "H": self.H,
            "vertices": [[z.real, z.imag] for z in self.vertices],
        }


def _feet(eps: float, a: complex, params: DilogParams):
    """Where the lines through ``a`` along ``i b`` and ``i conj(b)`` meet the baseline."""
    h0 = eps * params.b.real / params.sqrtN
    ib, ibb = 1j * params.b, 1j * params.b.conjugate()
    # Im(ib) = Im(i conj b) = Re b > 0, so both lines cross every height once
    t1 = (h0 - a.imag) / ib.imag
    t2 = (h0 - a.imag) / ibb.imag
    f1, f2 = a + t1 * ib, a + t2 * ibb
    return sorted([f1, f2], key=lambda z: z.real)


def build_gamma(eps: float, a: complex, H: float, params: DilogParams) -> ContourSpec:
    """The tent ``gamma_{eps,a}`` truncated to ``[-H, H]``.

    Raises ContourError for ``eps >= 0``, for real b (the tent collapses),
    or when the detour does not fit inside ``[-H, H]``.
    """
    if not eps < 0:
        raise ContourError(f"eps must be negative, got {eps}")
    if params.b.imag <= 0:
        raise ContourError("tent contours need Im(b) > 0")
    a = complex(a)
    h0 = eps * params.b.real / params.sqrtN
    if abs(a.imag - h0) < 1e-14:
        verts = (complex(-H, h0), complex(H, h0))
    else:
        f1, f2 = _feet(eps, a, params)
        if not (-H <= f1.real + 1e-12 and f2.real <= H + 1e-12):
            raise ContourError(f"height H={H} too small for the apex detour [{f1.real:.3g}, {f2.real:.3g}]")
        pts = [complex(-H, h0), f1, a, f2, complex(H, h0)]
        # drop zero-length pieces when a foot sits exactly at +-H
        verts = tuple(p for i, p in enumerate(pts) if i == 0 or abs(p - pts[i - 1]) > 1e-12)
    return ContourSpec(float(eps), a, float(H), params.N, params.b, verts)


def wedge_below(c: ContourSpec, apex: complex, margin: float = 0.0) -> bool:
    """Is the closed wedge ``apex + (T + c_b/sqrt N)`` strictly below ``c``?

    The wedge's upper boundary has the same slopes as the tent legs, so the
    gap ``contour - wedge`` is piecewise linear and attains its minimum at a
    breakpoint of either curve.  Far out, the wedge falls away linearly
    while the contour is flat, so finitely many checks suffice.
    """
    slope = c.b.real / c.b.imag
    xs = [z.real for z in c.vertices] + [apex.real]
    xs = np.array(xs)
    top = apex.imag - slope * np.abs(xs - apex.real)
    return bool(np.all(c.height(xs) - top > margin))


def triangle_apex(params: DilogParams, shift: complex = 0.0) -> complex:
    """Apex of ``T + shift``."""
    return -params.cb / params.sqrtN + shift


# -- regions -----------------------------------------------------------------

@dataclass(frozen=True)
class RegionSpec:
    """``kind`` is ``"R_eps_a"`` (4_1) or ``"R_a"`` (5_2)."""

    kind: str
    eps: float
    a: complex
    N: int = 1
    b: complex = complex(math.cos(math.pi / 6), math.sin(math.pi / 6))

    def __post_init__(self):
        if self.kind not in ("R_eps_a", "R_a"):
            raise ValueError(f"unknown region kind {self.kind!r}")


def _strict_in_T(x, params: DilogParams) -> np.ndarray:
    # open version of T: strictly below both boundary lines
    alpha, beta = _lattice_coords(x, params)
    return (alpha > 1e-12) & (beta > 1e-12)


def region_contains(r: RegionSpec, x) -> bool | np.ndarray:
    """Open-region membership by linear inequalities."""
    params = DilogParams(r.N, r.b)
    xv = np.asarray(getattr(x, "x", x), dtype=complex)
    cbn = params.cb / params.sqrtN
    if r.kind == "R_eps_a":
        lam = xv.imag * params.sqrtN / params.b.real
        ok = (r.eps / 2 < lam) & (lam < -r.eps) & _strict_in_T(xv - r.a, params)
    else:
        ok = _strict_in_T(xv - r.a - cbn, params) & _strict_in_T(-r.a - cbn - xv, params)
    return bool(ok) if np.ndim(ok) == 0 else ok


# -- quadrature --------------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def gauss_kronrod(f: Callable, z0: complex, z1: complex):
    """G7/K15 on the straight segment ``z0 -> z1``: (K15 value, error estimate).

    The error estimate is QUADPACK's rescaling of ``|K15 - G7|``, which
    is far less pessimistic than the raw difference for smooth integrands.
    """
    mid, half = (z0 + z1) / 2, (z1 - z0) / 2
    vals = f(mid + half * _NODES)
    k = np.dot(_WK, vals)
    g = np.dot(_WG15, vals)
    h = abs(half)
    err = abs(k - g) * h
    resabs = np.dot(_WK, np.abs(vals)) * h
    resasc = np.dot(_WK, np.abs(vals - k / 2)) * h
    if resasc != 0 and err != 0:
        err = resasc * min(1.0, (200 * err / resasc) ** 1.5)
    err = max(err, 50 * np.finfo(float).eps * resabs)
    return half * k, float(err)


def _adaptive(f, z0, z1, tol, max_panels):
    """Deterministic bisection until every panel meets its share of ``tol``.

    Returns value, error estimate and panel count.
    """
    total_len = abs(z1 - z0)
    stack = [(z0, z1)]
    value, err, panels = 0j, 0.0, 0
    while stack:
        a, b = stack.pop()
        k, e = gauss_kronrod(f, a, b)
        panels += 1
        if not np.isfinite(k):
            raise QuadratureError(f"non-finite integrand on panel [{a}, {b}]")
        share = tol * abs(b - a) / total_len
        if e <= share or panels >= max_panels:
            value += k
            err += e
        else:
            m = (a + b) / 2
            # push right half first so the left is refined first
            stack.append((m, b))
            stack.append((a, m))
    return value, err, panels


@dataclass
class QuadResult:
    value: complex
    error: float
    tail: float
    panels: int
    converged: bool
    H: float

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "error": self.error,
                "tail": self.tail, "panels": self.panels, "converged": self.converged, "H": self.H}


def quadrature(f: Callable, c: ContourSpec, tol: float, *, rates: Sequence[float] | None = None,
               max_panels: int = 20000, strict: bool = True) -> QuadResult:
    """Integrate ``f(y, n)`` over ``c`` in every class, with the 1/sqrt(N) measure.

    ``f`` must accept an array of complex ``y`` and an integer ``n``.
    ``rates`` gives the known exponential decay rates (left, right) of
    ``|f|`` along the baseline; the tail beyond ``+-H`` is then bounded by
    ``|f(+-H)| / rate`` and added to the error.  The tail is not added to
    the value.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    norm = 1 / math.sqrt(c.N)
    segs = c.segments
    lengths = np.array([abs(b - a) for a, b in segs])
    value, err, tail, panels = 0j, 0.0, 0.0, 0
    budget = 0.9 * tol / (norm * c.N)
    for n in range(c.N):
        fn = lambda y, n=n: np.asarray(f(y, n), dtype=complex)  # noqa: E731
        for (a, b), ln in zip(segs, lengths):
            v, e, p = _adaptive(fn, a, b, budget * ln / lengths.sum(), max_panels)
            value += v
            err += e
            panels += p
        if rates is not None:
            left, right = rates
            ends = fn(np.array([c.vertices[0], c.vertices[-1]]))
            tail += abs(ends[0]) / left + abs(ends[1]) / right
    value *= norm
    err *= norm
    tail *= norm
    converged = bool(np.isfinite(value) and err + tail <= tol)
    if strict and not np.isfinite(value):
        raise QuadratureError("integral is not finite")
    if strict and not converged:
        raise QuadratureError(f"error budget not met: error {err:.3g} + tail {tail:.3g} > tol {tol:.3g}")
    return QuadResult(complex(value), float(err), float(tail), panels, converged, c.H)


def l1_norm(f: Callable, c: ContourSpec, panels: int = 16) -> float:
    """Rough ``(1/sqrt N) sum_n int |f| |dy|`` by fixed K15 panels.

    Used as the scale for relative tolerances; it only needs to be right
    to a factor of a few.
    """
    total = 0.0
    for n in range(c.N):
        g = lambda y, n=n: np.abs(np.asarray(f(y, n), dtype=complex))  # noqa: E731
        for a, b in c.segments:
            pts = np.linspace(0, 1, panels + 1)
            for t0, t1 in zip(pts[:-1], pts[1:]):
                k, _ = gauss_kronrod(g, a + (b - a) * t0, a + (b - a) * t1)
                total += abs(k)
    return total / math.sqrt(c.N)


def height_for_tail(f: Callable, c: ContourSpec, tol: float, rates: Sequence[float],
                    *, target: float = 0.1, max_H: float = 200.0) -> ContourSpec:
    """A contour height with tail bound just below ``target * tol``.

    Uses the known exponential rates to jump close to the answer, then
    verifies by evaluating ``f`` at the new ends.
    """
    left, right = rates
    if min(left, right) <= 0:
        raise ContourError(f"integrand does not decay on this contour (rates {left:.3g}, {right:.3g})")
    norm = 1 / math.sqrt(c.N)
    H = c.H
    for _ in range(64):
        cur = c.with_height(H)
        bound = 0.0
        for n in range(c.N):
            ends = np.asarray(f(np.array([cur.vertices[0], cur.vertices[-1]]), n), dtype=complex)
            bound += abs(ends[0]) / left + abs(ends[1]) / right
        bound *= norm
        if bound <= target * tol:
            return cur
        # the bound falls at least like exp(-rate * dH); overshoot slightly
        need = math.log(bound / (target * tol)) / min(left, right)
        H = min(max_H, H + max(0.05, 1.05 * need))
        if H >= max_H and cur.H >= max_H:
            raise ContourError(f"tail bound {bound:.3g} not reachable below H={max_H}")
    raise ContourError("height search did not converge")
