"""
From functions on A_N to sections over the torus
================================================

The Weil-Gel'fand-Zak transform carries Gaussians to theta-like sections.
The quantum operators become complex shifts along the torus directions.

"""

from complexaj.wgz import QuantParams, gaussian_family, section_norm, an_norm, wgz_forward, wgz_check

family = gaussian_family(1)
for f in family:
    s = wgz_forward(f, 1)
    print(f"mu={f.mu:+.2f}  |s| = {section_norm(s):.10f}  |f| = {an_norm(f):.10f}")

qp = QuantParams(1, 1.0)
print("b =", qp.b, " q from b:", qp.q_b, " q from t:", qp.q_t)

rep = wgz_check(1, 1.0)
print("lemma residuals:", rep["lemma_residuals"])
print("correspondence:", rep["correspondence"])
print("passed:", rep["passed"])
