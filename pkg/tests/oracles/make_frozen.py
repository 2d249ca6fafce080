"""Regenerate tests/oracles/frozen.json from oracles that share no code with the package's evaluators.

- Faddeev's integral at N = 1, by mpmath at 30 digits on a different contour.
- The level-3 product, by mpmath.qp at 30 digits.
- chi at x = 0, by composite Simpson on a fixed dense grid (no adaptivity,
  no tail model) along a hand-built tent that differs from the automatic one.

Run from the repository root: python3 tests/oracles/make_frozen.py
"""

import json
from pathlib import Path

import mpmath as mp
import numpy as np

mp.mp.dps = 30
B = mp.expjpi(mp.mpf(1) / 6)


def faddeev(z, b=B, delta=1.0):
    z = mp.mpc(z)

    def f(t):
        w = t + 1j * delta
        return mp.exp(-2j * z * w) / (4 * mp.sinh(w * b) * mp.sinh(w / b) * w)

    return mp.exp(mp.quad(f, [-mp.inf, -10, -1, 0, 1, 10, mp.inf]))


def level_n(x, n, N, b=B):
    """(s u; Q)_inf / (s' P u'; P)_inf with s = e^{pi i (b^2+1)/N}, Q = s^2, P = conj-side inverse."""
    x = mp.mpc(x)
    bb = mp.conj(b)
    rt = mp.sqrt(N)
    s = mp.exp(1j * mp.pi * (b * b + 1) / N)
    u = mp.exp(2 * mp.pi * b * x / rt + 2j * mp.pi * n / N)
    s2 = mp.exp(1j * mp.pi * (bb * bb + 1) / N)
    P = s2 ** -2
    u2 = mp.exp(2 * mp.pi * bb * x / rt - 2j * mp.pi * n / N)
    return mp.qp(s * u, s * s) / mp.qp(s2 * P * u2, P)


def simpson_chi(knot, eps, apex, H, h=2e-3):
    from complexaj.contour import build_gamma
    from complexaj.invariants import admissible, log_integrand
    from complexaj.qdilog import DilogParams

    p = DilogParams()
    c = build_gamma(eps, apex, H, p)
    assert admissible(knot, 0j, c, p)
    total = 0j
    for a, z in c.segments:
        L = abs(z - a)
        m = max(2, int(np.ceil(L / h / 2)) * 2)
        t = np.linspace(0, 1, m + 1)
        w = np.ones(m + 1)
        w[1:-1:2], w[2:-1:2] = 4, 2
        y = a + (z - a) * t
        total += (z - a) / (3 * m) * np.sum(w * np.exp(log_integrand(knot, 0j, 0, y, 0, p)))
    return complex(total), c


def main():
    out = {"b": "exp(i pi/6)", "faddeev_N1": [], "level3": [], "chi_x0": {}}
    for z in [0.0, 0.3 + 0.1j, -0.7 + 0.4j, 1.2 - 0.5j, -0.2 - 0.8j]:
        v = faddeev(z)
        out["faddeev_N1"].append({"x": [float(mp.re(z)), float(mp.im(z))], "value": [float(v.real), float(v.imag)]})
    for x, n in [(0.3 + 0.1j, 1), (-0.4 + 0.2j, 2), (0.0, 0)]:
        v = level_n(x, n, 3)
        out["level3"].append({"x": [x.real if isinstance(x, complex) else x, complex(x).imag], "n": n,
                              "value": [float(v.real), float(v.imag)]})
    for knot in ("41", "52"):
        v, c = simpson_chi(knot, -0.8, complex(0.1, 0.05), 14.0)
        out["chi_x0"][knot] = {"value": [v.real, v.imag], "eps": c.eps, "apex": [c.apex.real, c.apex.imag],
                               "H": c.H, "grid_step": 2e-3}
    path = Path(__file__).with_name("frozen.json")
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
