"""Dense complex matrix kernel.

Conventions used across the whole package:

* the dot product ``a . b`` is complex bilinear, ``sum_j a_j b_j`` with no
  conjugation; adjoints are always written explicitly;
* real coordinates on C^n are ordered ``(u_1..u_n, v_1..v_n)`` with
  ``x = u + i v``.

All gates are relative: a matrix counts as singular when its smallest
singular value drops below ``EPS_SING`` times its spectral norm.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure, ShapeMismatch, SingularMatrix

#: relative invertibility gate used by every solve in the package
EPS_SING = 1e-10
#: relative residual tolerance for linear solves
TOL_SOLVE = 1e-9
#: relative reconstruction tolerance for eigendecompositions
TOL_EIG = 1e-9


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Coerce to a 2-d complex array and check finiteness."""
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got ndim={a.ndim}")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise NumericalFailure("matrix has non-finite entries")
    return a


def spectral_norm(m) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def smallest_singular_value(m) -> float:
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def sym(m) -> np.ndarray:
    """Symmetrize (transpose, no conjugation)."""
    m = np.asarray(m)
    return 0.5 * (m + m.T)


def herm(m) -> np.ndarray:
    """Hermitian part, (M + M*)/2."""
    m = np.asarray(m)
    return 0.5 * (m + m.conj().T)


def solve(m, b, eps_sing: float = EPS_SING) -> np.ndarray:
    """Solve M X = B with a relative singularity gate.

    Raises
    ------
    SingularMatrix
        If the smallest singular value of ``M`` is below
        ``eps_sing * norm(M)``.
    NumericalFailure
        If the residual exceeds ``TOL_SOLVE`` relative to ``norm(B)``.
    """
    m = as_matrix(m, square=True)
    b_arr = np.asarray(b, dtype=complex)
    vector_rhs = b_arr.ndim == 1
    rhs = b_arr[:, None] if vector_rhs else b_arr
    if rhs.shape[0] != m.shape[0]:
        raise ShapeMismatch(f"rhs rows {rhs.shape[0]} != matrix dim {m.shape[0]}")
    nm = spectral_norm(m)
    if smallest_singular_value(m) < eps_sing * max(nm, np.finfo(float).tiny):
        raise SingularMatrix(f"matrix is singular at relative tolerance {eps_sing:g}")
    x = np.linalg.solve(m, rhs)
    nb = spectral_norm(rhs)
    if nb > 0 and spectral_norm(m @ x - rhs) > TOL_SOLVE * nb:
        raise NumericalFailure("linear solve residual above tolerance")
    return x[:, 0] if vector_rhs else x


def inv(m, eps_sing: float = EPS_SING) -> np.ndarray:
    """Gated inverse, ``solve(m, I)``."""
    m = as_matrix(m, square=True)
    return solve(m, np.eye(m.shape[0], dtype=complex), eps_sing=eps_sing)


def eig_hermitian_real(s, tol: float = TOL_EIG):
    """Eigendecomposition of a real symmetric matrix.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Orthonormal eigenvectors as columns, with a deterministic sign:
        the first component of each vector that is not negligible is made
        positive.

    Raises
    ------
    NumericalFailure
        If ``S`` is not symmetric, or the reconstruction
        ``V diag(w) V^T`` misses ``S`` by more than ``tol * norm(S)``.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {s.shape}")
    ns = spectral_norm(s)
    if spectral_norm(s - s.T) > 1e-12 * max(ns, 1.0):
        raise NumericalFailure("matrix is not symmetric")
    w, v = np.linalg.eigh(0.5 * (s + s.T))
    # deterministic sign: first non-negligible component positive
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.nonzero(np.abs(col) > 1e-12)[0]
        j = idx[0] if idx.size else 0
        if col[j] < 0:
            v[:, k] = -col
    if spectral_norm(v @ np.diag(w) @ v.T - s) > tol * max(ns, 1.0):
        raise NumericalFailure("eigendecomposition reconstruction above tolerance")
    if spectral_norm(v.T @ v - np.eye(s.shape[0])) > tol:
        raise NumericalFailure("eigenvectors are not orthonormal")
    return w, v


def schur_block_invert(a, n: int, eps_sing: float = EPS_SING) -> np.ndarray:
    """Invert a 2n x 2n block matrix through the Schur complement of A11.

    The inverse is assembled from the blocks

        B11 = A11^-1 + A11^-1 A12 S^-1 A21 A11^-1,   B12 = -A11^-1 A12 S^-1,
        B21 = -S^-1 A21 A11^-1,                      B22 = S^-1,

    with ``S = A22 - A21 A11^-1 A12``.  ``B22`` is invertible whenever
    ``A`` and ``A11`` are.

    Raises
    ------
    SingularMatrix
        If ``A`` or its leading n x n block fails the relative gate.
    """
    a = as_matrix(a, square=True)
    if a.shape[0] != 2 * n:
        raise ShapeMismatch(f"expected shape {(2 * n, 2 * n)}, got {a.shape}")
    na = spectral_norm(a)
    if smallest_singular_value(a) < eps_sing * max(na, np.finfo(float).tiny):
        raise SingularMatrix("block matrix is singular at the relative gate")
    a11, a12 = a[:n, :n], a[:n, n:]
    a21, a22 = a[n:, :n], a[n:, n:]
    n11 = spectral_norm(a11)
    if smallest_singular_value(a11) < eps_sing * max(n11, np.finfo(float).tiny):
        raise SingularMatrix("leading block A11 is singular at the relative gate")
    a11_inv = solve(a11, np.eye(n, dtype=complex), eps_sing=eps_sing)
    schur = a22 - a21 @ a11_inv @ a12
    b22 = solve(schur, np.eye(n, dtype=complex), eps_sing=eps_sing)
    b12 = -a11_inv @ a12 @ b22
    b21 = -b22 @ a21 @ a11_inv
    b11 = a11_inv + a11_inv @ a12 @ b22 @ a21 @ a11_inv
    b = np.block([[b11, b12], [b21, b22]])
    if spectral_norm(b @ a - np.eye(2 * n)) > TOL_SOLVE * max(1.0, na * spectral_norm(b)):
        raise NumericalFailure("Schur-complement inverse residual above tolerance")
    return b


def embed_real(n: int) -> np.ndarray:
    """Map real coordinates (u, v) to the pair (x, xbar), x = u + i v.

    Returns the 2n x 2n complex matrix W with ``W r = (x, conj(x))`` for
    real ``r = (u, v)``.
    """
    i = np.eye(n)
    return np.block([[i, 1j * i], [i, -1j * i]])


def split_real_linear(t: np.ndarray):
    """Split a real-linear map R^{2n} -> C^m into linear/antilinear parts.

    ``t`` is an m x 2n complex matrix acting on realified vectors of
    x = u + iv.  Returns (P, N) with ``t r = P x + N conj(x)``.
    """
    t = np.asarray(t, dtype=complex)
    if t.shape[1] % 2:
        raise ShapeMismatch("realified map must have an even number of columns")
    n = t.shape[1] // 2
    t1, t2 = t[:, :n], t[:, n:]
    p = 0.5 * (t1 - 1j * t2)
    nn = 0.5 * (t1 + 1j * t2)
    return p, nn
