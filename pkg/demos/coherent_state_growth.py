"""Coherent-state probes.

E(w) is the logarithm of the squared norm of the image of the normalized
reproducing kernel at w, up to a constant.  For bounded operators E stays
bounded above; for compact ones it tends to minus infinity; for unbounded
ones some ray pushes it to plus infinity.  The scan below uses the
closed-form quadratic of E, and cross-checks a few values against the
per-point maximization.
"""

import numpy as np

from bargtop import (
    FamilyParams,
    analyze,
    coherent_growth_scan,
    coherent_norm_exponent,
    family_instance,
)
from bargtop.oracle import growth_direction

RADII = [0.0, 1.0, 2.0, 4.0, 8.0]

for label, lam in [("compact (lambda = -1)", -1.0), ("identity (lambda = 0)", 0.0),
                   ("unbounded (lambda = 0.2)", 0.2)]:
    p = FamilyParams(lam, np.zeros((1, 1)), [0], [0])
    phi0, q = family_instance(p)
    a = analyze(phi0, q)
    exps, w0 = coherent_growth_scan(phi0, q, radii=RADII)
    print(f"{label}: verdicts bounded={a.bounded.value}, compact={a.compact.value}")
    print(f"  direction w0 = {w0}")
    for t, e in zip(RADII, exps):
        direct = coherent_norm_exponent(a.f, a.reduced, t * w0)
        print(f"  E({t:3.1f} w0) = {e:12.6f}   (per-point route: {direct:12.6f})")
    gamma2 = abs(p.gamma) ** 2
    print(f"  closed form slope (|gamma|^2 - 1)/2 = {(gamma2 - 1) / 2:+.6f} per |w|^2")
    print()

p = FamilyParams(0.21, np.zeros((1, 1)), [0.3], [0.1])
phi0, q = family_instance(p)
w0, rate = growth_direction(phi0, q)
print(f"steepest growth direction for lambda = 0.21 with linear terms: {w0}, rate {rate:.4f}")
