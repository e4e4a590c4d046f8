"""Tour of the explicit family on the model weight |x|^2 / 4.

The symbol q(x) = lambda |x|^2 + A conj(x).conj(x) + conj(c).x - d.conj(x)
has closed-form answers: with gamma = 1/(1 - 2 lambda), the operator is
bounded iff 4|gamma|^2 ||A|| <= 1 - |gamma|^2 plus a linear condition on
the boundary, and compact iff the inequality is strict.  This script walks
through the regimes and checks the generic pipeline against the closed
form on each instance.
"""

import numpy as np

from bargtop import FamilyParams, analyze, family_decide, family_instance

CASES = {
    "identity (q = 0)": FamilyParams(0.0, np.zeros((1, 1)), [0], [0]),
    "contracting, lambda = -1": FamilyParams(-1.0, np.zeros((1, 1)), [0], [0]),
    "rotating, lambda = 0.45i": FamilyParams(0.45j, np.zeros((1, 1)), [0], [0]),
    "expanding, lambda = 0.2": FamilyParams(0.2, np.zeros((1, 1)), [0], [0]),
    "with A, inside the disc": FamilyParams(-0.4, 0.05 * np.eye(1), [0.2], [0.1j]),
}

# a boundary-circle instance: mu sits exactly where the positivity
# inequality becomes an equality, so the linear condition decides
gamma = 0.8
lam = (1 - 1 / gamma) / 2
theta = 0.9
mu = (1 - gamma**2) / (4 * gamma**2) * np.exp(1j * theta)
c = np.array([0.3 - 0.2j])
d_good = np.conj(gamma) * c + 4 * gamma * mu * np.conj(c) + 1j * np.exp(0.5j * theta) * np.array([0.7])
CASES["boundary circle, condition holds"] = FamilyParams(lam, mu * np.eye(1), c, d_good)
CASES["boundary circle, condition fails"] = FamilyParams(lam, mu * np.eye(1), c, d_good + 0.5)

print(f"{'case':38s} {'|gamma|':>8s} {'bounded':>9s} {'compact':>9s} {'routes':>7s}")
for name, p in CASES.items():
    closed = family_decide(p)
    a = analyze(*family_instance(p))
    agree = closed.bounded is a.bounded and closed.compact is a.compact
    print(
        f"{name:38s} {abs(p.gamma):8.3f} {closed.bounded.value:>9s}"
        f" {closed.compact.value:>9s} {'agree' if agree else 'DIFFER':>7s}"
    )

print()
print("phase data for the contracting case:")
a = analyze(*family_instance(CASES['contracting, lambda = -1']))
print("  F_{x xi} coefficient:", a.weyl.F.mxz[0, 0], " (closed form 2l/(1-l) = -1)")
print("  restriction eigenvalues of Im F on the plane:", a.positivity.eigenvalues)
print("  image-plane Hermitian part:", a.phi1.H[0, 0], " (closed form |gamma|^2/4 = 1/36)")
