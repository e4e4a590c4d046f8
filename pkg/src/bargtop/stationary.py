"""Exact stationary phase for quadratic functions with parameters.

Everything here is exact linear algebra: for a non-degenerate quadratic

    g(w; p) = 1/2 (M w).w + (L p + r0).w + c0,

the unique critical point in ``w`` is ``w* = -M^{-1}(L p + r0)`` and the
critical value

    vc(p) = c0 - 1/2 (L p + r0) . M^{-1} (L p + r0)

is again a quadratic polynomial, now in the parameters ``p``.  This single
engine backs both the coherent-state kernel phase (parameters ``(x, z)``)
and the phase of the symbol integral (parameters ``(x, xi)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegeneratePhase, NumericalFailure, ShapeMismatch
from .forms import HoloQuadratic2n, QuadraticSymbol


@dataclass(frozen=True)
class QuadCriticalProblem:
    """Quadratic critical-value problem.

    Parameters
    ----------
    m : (2k, 2k) complex symmetric
        Hessian in the integration variables.
    lmap : (2k, 2p) complex
        Linear dependence of the gradient offset on the parameters.
    r0 : (2k,) complex
        Constant gradient offset.
    c0 : complex
        Constant term.
    """

    m: np.ndarray
    lmap: np.ndarray
    r0: np.ndarray
    c0: complex = 0.0

    def __post_init__(self):
        m = linalg.as_matrix(self.m, square=True)
        if linalg.spectral_norm(m - m.T) > 1e-12 * max(linalg.spectral_norm(m), 1.0):
            raise ShapeMismatch("Hessian must be symmetric")
        lmap = linalg.as_matrix(self.lmap)
        if lmap.shape[0] != m.shape[0]:
            raise ShapeMismatch("parameter map rows must match the Hessian size")
        r0 = np.asarray(self.r0, dtype=complex).reshape(-1)
        if r0.shape[0] != m.shape[0]:
            raise ShapeMismatch("offset length must match the Hessian size")
        object.__setattr__(self, "m", linalg.sym(m))
        object.__setattr__(self, "lmap", lmap)
        object.__setattr__(self, "r0", r0)
        object.__setattr__(self, "c0", complex(self.c0))

    def objective(self, w, p) -> complex:
        w = np.asarray(w, dtype=complex)
        p = np.asarray(p, dtype=complex)
        r = self.lmap @ p + self.r0
        return complex(0.5 * (self.m @ w) @ w + r @ w + self.c0)

    def gradient_w(self, w, p) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        p = np.asarray(p, dtype=complex)
        return self.m @ w + self.lmap @ p + self.r0


def critical_value(prob: QuadCriticalProblem, eps_sing: float = linalg.EPS_SING) -> HoloQuadratic2n:
    """Critical value of a quadratic problem as a polynomial in p.

    The parameter space must have even dimension 2p; the result is returned
    with its two p-blocks split in the usual (first slot, second slot)
    layout of :class:`HoloQuadratic2n`.

    Raises
    ------
    DegeneratePhase
        If the Hessian fails the relative singular-value gate.
    """
    m = prob.m
    nm = linalg.spectral_norm(m)
    if linalg.smallest_singular_value(m) < eps_sing * max(nm, np.finfo(float).tiny):
        raise DegeneratePhase("quadratic phase is degenerate")
    if prob.lmap.shape[1] % 2:
        raise ShapeMismatch("parameter dimension must be even")
    minv_l = np.linalg.solve(m, prob.lmap)
    minv_r = np.linalg.solve(m, prob.r0)
    quad = linalg.sym(-prob.lmap.T @ minv_l)
    lin = -prob.lmap.T @ minv_r
    const = prob.c0 - 0.5 * prob.r0 @ minv_r
    out = HoloQuadratic2n.from_hessian(quad, lin, const)

    # verify the reconstructed critical point annihilates the gradient
    rng = np.random.default_rng(1)
    dim_p = prob.lmap.shape[1]
    scale = max(nm, float(np.linalg.norm(prob.r0)), 1.0)
    for _ in range(5):
        p = rng.standard_normal(dim_p) + 1j * rng.standard_normal(dim_p)
        w_star = -np.linalg.solve(m, prob.lmap @ p + prob.r0)
        if np.linalg.norm(prob.gradient_w(w_star, p)) > 1e-10 * scale * max(
            1.0, float(np.linalg.norm(w_star))
        ):
            raise NumericalFailure("critical point fails the gradient condition")
    return out


def nondegeneracy_check(q: QuadraticSymbol, psi0: HoloQuadratic2n, s: int):
    """Gate the Hessian of Q2 - s * Psi0 in the variables (y, theta).

    ``s = 2`` guards the coherent-state kernel phase, ``s = 4`` the phase of
    the symbol integral.  Returns ``(ok, margin)`` where the margin is the
    smallest singular value of the Hessian.
    """
    if s not in (2, 4):
        raise ValueError("s must be 2 or 4")
    n = q.n
    if psi0.n != n:
        raise ShapeMismatch("symbol and weight polarization dimensions differ")
    ht = psi0.mxz  # equals H^T for a reduced weight
    hess = np.block(
        [
            [q.qyy, q.qyt - s * ht],
            [q.qyt.T - s * ht.T, q.qtt],
        ]
    )
    smin = linalg.smallest_singular_value(hess)
    ok = smin >= linalg.EPS_SING * max(linalg.spectral_norm(hess), np.finfo(float).tiny)
    return ok, smin
