"""Brute-force check of the symbol phase.

The symbol of the operator on the graph plane is C exp(i(F + alpha)); its
value at x relative to the value at 0 must therefore equal
exp(i(F + alpha)(x, xi(x))).  Here the left side is computed by direct
tensor Gauss-Hermite quadrature of

    a(x) = C integral exp(-4 Phi0(x - y) + q(y)) L(dy),

and the right side by exact stationary phase, two entirely different
routes through the same instance.
"""

import numpy as np

from bargtop import (
    FamilyParams,
    LagrangianPlane,
    QuadratureSpec,
    analyze,
    family_instance,
    weyl_symbol_quadrature,
)

p = FamilyParams(0.1 + 0.15j, np.array([[0.04 - 0.02j]]), [0.3 + 0.1j], [0.2 - 0.3j])
phi0, q = family_instance(p)
a = analyze(phi0, q)
plane = LagrangianPlane(a.reduced)
spec = QuadratureSpec(order=60, rel_tol=1e-8)

print("instance: lambda = 0.1+0.15i, A = 0.04-0.02i, c, d nonzero")
print(f"verdicts: bounded = {a.bounded.value}, compact = {a.compact.value}")
print()
print(f"{'x':>12s} {'|ratio|':>12s} {'|exp(i(F+alpha))|':>18s} {'abs err':>10s}")
for xv in [0.5, 1.0 + 0.5j, -1.2 + 0.8j, 2.0, -0.3 - 1.7j]:
    ratio = weyl_symbol_quadrature(phi0, q, [xv], spec)
    expected = np.exp(1j * a.weyl.value(plane.point([xv])))
    print(f"{str(xv):>12s} {abs(ratio):12.8f} {abs(expected):18.8f} {abs(ratio - expected):10.2e}")

print()
print("growth of |a| along a ray decides boundedness in the raw data:")
for t in (0.5, 1.0, 2.0, 4.0):
    ratio = weyl_symbol_quadrature(phi0, q, [t], spec)
    print(f"  |a({t:3.1f})/a(0)| = {abs(ratio):12.6g}")
