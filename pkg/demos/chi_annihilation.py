"""
The state integral and its annihilator
======================================

chi is an integral over a tent-shaped contour that passes above the pole
wedges of the integrand.  Applying A-hat^C means evaluating chi at shifted
arguments, each with its own contour.

"""

import numpy as np

from complexaj.invariants import auto_contour, check_invariant_annihilation, chi, decay_rates, pole_wedges
from complexaj.qdilog import ANPointC, DilogParams

params = DilogParams()  # N = 1, b = exp(i pi/6)
x = ANPointC(0.1, 0, 1)

# where are the poles, and which contour clears them?
print("wedge apexes:", np.round(pole_wedges("52", x.x, params), 4))
c = auto_contour("52", x.x, params)
print("contour vertices:", np.round(c.vertices, 4))
print("tail decay rates:", decay_rates("52", c.eps, x.x, params))

r = chi("52", x, params, tol=1e-10)
print(f"chi_52(0.1) = {r.value:.12f}  (error {r.quad.error:.1e}, H = {r.quad.H:.2f})")

###############################################################################
# The residual of A-hat^C applied to chi falls with the quadrature tolerance.

for tol in (1e-6, 1e-7, 1e-8):
    rep = check_invariant_annihilation("41", ANPointC(0, 0, 1), params, tol=tol)
    print(f"tol {tol:.0e}: relative residual {rep['residual']:.2e} over {rep['terms']} terms")
