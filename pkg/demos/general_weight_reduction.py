"""A non-model weight with a pluriharmonic part.

Weights Phi0(x) = (H x).conj(x) + Re((S x).x) with S != 0 are first
reduced: a shear (y, eta) -> (y, eta + 2iS y) maps the graph plane of Phi0
onto the graph plane of the Hermitian part, and the decision problem is
unchanged.  The two constructions of the canonical transformation (through
the kernel phase and through the symbol phase) must then coincide.
"""

import numpy as np

from bargtop import WeightForm, analyze, hermitian_reduction, polarize, validate_instance

n = 2
H = np.array([[1.0, 0.3 - 0.2j], [0.3 + 0.2j, 1.5]])
S = np.array([[0.2, 0.1j], [0.1j, -0.15]])
phi0 = WeightForm(H, S)

# a symbol well inside the admissible region for this weight
q = polarize(
    qxx=0.05 * np.eye(n),
    qxxbar=np.diag([0.2, -0.3 + 0.1j]),
    qxbarxbar=0.04 * np.ones((n, n)),
    lin_x=[0.3, -0.2j],
    lin_xbar=[0.1, 0.4],
    const=0.0,
)

report = validate_instance(phi0, q)
print("validation:")
print(f"  strict plurisubharmonicity margin : {report.strict_psh_margin:.4f}")
print(f"  majorization margin               : {report.majorization_margin:.4f}")
print(f"  nondegeneracy margin              : {report.nondegenerate_margin:.4f}")

reduced, shear = hermitian_reduction(phi0)
print()
print("reduction shear, lower-left block (should be 2iS):")
print(shear.m[n:, :n])

a = analyze(phi0, q)
print()
print(f"verdicts: bounded = {a.bounded.value}, compact = {a.compact.value}")
print(f"positivity: {a.positivity.classification.value}, eigenvalues {np.round(a.positivity.eigenvalues, 5)}")
dm = np.linalg.norm(a.kappa.m - a.kappa_tilde.m, 2)
dt = np.linalg.norm(a.kappa.t - a.kappa_tilde.t)
print(f"route agreement: |dM| = {dm:.2e}, |dt| = {dt:.2e}")
if a.phi1 is not None:
    gap = np.linalg.eigvalsh(a.reduced.realified().s - a.phi1.realified().s)
    print(f"weight gap eigenvalues (positive iff positive map): {np.round(gap, 5)}")
