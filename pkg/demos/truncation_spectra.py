"""Truncated operator matrices on the model space.

The operator acts on the span of the normalized monomials x^k; compressing
it to the first N of them gives a matrix whose largest singular value is
monotone in N.  Compact instances show converging norms and rapidly
decaying singular values, unbounded instances show norms exploding with N.
"""

import numpy as np

from bargtop import FamilyParams, family_instance, fock_matrix, operator_norm_scan

SIZES = [10, 20, 40, 60]

for label, lam in [("compact (lambda = -1)", -1.0), ("unbounded (lambda = 0.2)", 0.2),
                   ("rotating (lambda = 0.45i)", 0.45j)]:
    p = FamilyParams(lam, np.zeros((1, 1)), [0], [0])
    _, q = family_instance(p)
    norms = operator_norm_scan(q, SIZES)
    print(label)
    for n_basis, nrm in zip(SIZES, norms):
        print(f"  N = {n_basis:3d}: largest singular value = {nrm:12.6g}")
    trunc = fock_matrix(q, 60)
    svals = np.linalg.svd(trunc.matrix, compute_uv=False)
    print(f"  N = 60 tail (index 40..59): max = {np.max(svals[40:]):.2e}")
    print()

# mixed instance with linear terms: still diagonalizable numerically
p = FamilyParams(-0.5, 0.03 * np.eye(1), [0.4], [0.2 - 0.1j])
_, q = family_instance(p)
norms = operator_norm_scan(q, SIZES)
print("compact with A, c, d nonzero")
for n_basis, nrm in zip(SIZES, norms):
    print(f"  N = {n_basis:3d}: largest singular value = {nrm:12.6g}")
