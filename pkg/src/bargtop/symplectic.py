"""Affine canonical transformations and I-Lagrangian graph planes.

The complex symplectic form on C^{2n} = C^n_x x C^n_xi is
``sigma(u, v) = (J u).v`` with the block matrix ``J = [[0, I], [-I, 0]]``,
so a linear map ``M`` is canonical iff ``M^T J M = J``.  The Hamilton
vector of a function ``h`` is ``H_h = (dh/dxi, -dh/dx)``.

A weight ``Phi`` determines the graph plane

    Lambda_Phi = { (x, -2i dPhi/dx(x)) : x in C^n },

which is I-Lagrangian and R-symplectic.  Planes are stored with a cached
realified basis so that every restriction goes through one parameterization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .errors import (
    DegenerateFxz,
    NotAGraph,
    NotBijective,
    NotReduced,
    NumericalFailure,
    PreconditionViolated,
    ShapeMismatch,
)
from .forms import HoloQuadratic2n, WeightForm

#: relative tolerance band for all strict-inequality classifications
TAU_DEFAULT = 1e-9
#: eigenvalues below this fraction of the restricted-Hessian scale count as
#: exact zeros (floating-point noise from exact cancellations)
ZERO_FLOOR = 1e-12


def symplectic_j(n: int) -> np.ndarray:
    i = np.eye(n, dtype=complex)
    z = np.zeros((n, n), dtype=complex)
    return np.block([[z, i], [-i, z]])


@dataclass(frozen=True)
class AffineSymplecticMap:
    """Affine canonical transformation rho -> M rho + t."""

    m: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        m = linalg.as_matrix(self.m, square=True)
        if m.shape[0] % 2:
            raise ShapeMismatch("phase-space dimension must be even")
        t = np.asarray(self.t, dtype=complex).reshape(-1)
        if t.shape[0] != m.shape[0]:
            raise ShapeMismatch("translation length must match the linear part")
        j = symplectic_j(m.shape[0] // 2)
        defect = linalg.spectral_norm(m.T @ j @ m - j)
        if defect > 1e-10 * linalg.spectral_norm(m) ** 2:
            raise NumericalFailure(f"linear part is not symplectic (defect {defect:.2e})")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.m.shape[0] // 2

    @classmethod
    def identity(cls, n: int) -> "AffineSymplecticMap":
        return cls(np.eye(2 * n, dtype=complex), np.zeros(2 * n, dtype=complex))

    @property
    def is_linear(self) -> bool:
        return float(np.linalg.norm(self.t)) <= 1e-14 * max(linalg.spectral_norm(self.m), 1.0)

    def apply(self, rho) -> np.ndarray:
        return self.m @ np.asarray(rho, dtype=complex) + self.t

    def compose(self, other: "AffineSymplecticMap") -> "AffineSymplecticMap":
        """self after other."""
        return AffineSymplecticMap(self.m @ other.m, self.m @ other.t + self.t)

    def inverse(self) -> "AffineSymplecticMap":
        minv = linalg.inv(self.m)
        return AffineSymplecticMap(minv, -minv @ self.t)

    def isclose(self, other: "AffineSymplecticMap", tol: float = 1e-9) -> bool:
        scale_m = max(linalg.spectral_norm(self.m), linalg.spectral_norm(other.m), 1.0)
        scale_t = max(float(np.linalg.norm(self.t)), float(np.linalg.norm(other.t)), 1.0)
        return (
            linalg.spectral_norm(self.m - other.m) <= tol * scale_m
            and float(np.linalg.norm(self.t - other.t)) <= tol * scale_t
        )


@dataclass(frozen=True)
class LinearFunctional2n:
    """Complex linear functional ell(x, xi) = gx.x + gxi.xi."""

    gx: np.ndarray
    gxi: np.ndarray

    def __post_init__(self):
        gx = np.asarray(self.gx, dtype=complex).reshape(-1)
        gxi = np.asarray(self.gxi, dtype=complex).reshape(-1)
        if gx.shape != gxi.shape:
            raise ShapeMismatch("gx and gxi must have equal length")
        object.__setattr__(self, "gx", gx)
        object.__setattr__(self, "gxi", gxi)

    @property
    def n(self) -> int:
        return self.gx.shape[0]

    @classmethod
    def zero(cls, n: int) -> "LinearFunctional2n":
        return cls(np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.gx, self.gxi])

    def value(self, rho) -> complex:
        rho = np.asarray(rho, dtype=complex)
        return complex(self.vector() @ rho)

    def hamilton(self) -> np.ndarray:
        """Hamilton vector (d/dxi, -d/dx) = J grad."""
        return symplectic_j(self.n) @ self.vector()

    def pullback(self, m: np.ndarray) -> "LinearFunctional2n":
        """The functional rho -> ell(M rho)."""
        g = linalg.as_matrix(m, square=True).T @ self.vector()
        return LinearFunctional2n(g[: self.n], g[self.n :])

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector()))


@dataclass(frozen=True)
class LagrangianPlane:
    """Graph plane of a weight with a cached realified basis.

    ``basis`` has 2n complex columns; column j is the plane point over
    ``x = e_j`` and column n+j the point over ``x = i e_j``.
    """

    phi: WeightForm
    basis: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.basis is None:
            n = self.phi.n
            h, s = self.phi.H, self.phi.S
            i = np.eye(n, dtype=complex)
            top = np.hstack([i, 1j * i])
            bottom = np.hstack([-2j * (h.T + s), 2.0 * (s - h.T)])
            object.__setattr__(self, "basis", np.vstack([top, bottom]))
        b = linalg.as_matrix(self.basis)
        # I-Lagrangian and R-symplectic: sigma restricted to the realified
        # tangent space is real and non-degenerate
        j = symplectic_j(self.phi.n)
        gram = b.T @ j @ b
        scale = max(linalg.spectral_norm(gram), 1.0)
        if linalg.spectral_norm(gram.imag) > 1e-10 * scale:
            raise NumericalFailure("plane is not I-Lagrangian")
        if linalg.smallest_singular_value(gram.real) < 1e-10 * scale:
            raise NumericalFailure("restricted symplectic form is degenerate")

    @property
    def n(self) -> int:
        return self.phi.n

    def point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex).reshape(-1)
        return np.concatenate([x, -2j * self.phi.gradient(x)])

    def embed(self, r) -> np.ndarray:
        """Plane point for realified coordinates r = (u, v)."""
        return self.basis @ np.asarray(r, dtype=float)

    def restrict_quadratic(self, f: HoloQuadratic2n) -> np.ndarray:
        """Complex symmetric matrix C with f|plane (r) = (C r).r."""
        b = self.basis
        return linalg.sym(0.5 * (b.T @ f.hessian() @ b))

    def restrict_linear(self, ell: LinearFunctional2n) -> np.ndarray:
        """Complex row vector g with ell|plane (r) = g.r."""
        return self.basis.T @ ell.vector()


class Positivity(str, Enum):
    STRICTLY_POSITIVE = "strictly_positive"
    POSITIVE = "positive"
    NOT_POSITIVE = "not_positive"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class PositivityResult:
    """Classification of Im F restricted to a graph plane."""

    classification: Positivity
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    matrix: np.ndarray
    margin: float
    scale: float
    zero_band: float
    tau_band: float

    def kernel(self) -> np.ndarray:
        """Orthonormal basis (columns) of the near-zero eigenspace."""
        band = max(self.tau_band, self.zero_band)
        mask = np.abs(self.eigenvalues) <= band
        return self.eigenvectors[:, mask]


def build_kappa(f: HoloQuadratic2n, phi0: WeightForm, eps_sing: float = linalg.EPS_SING):
    """Canonical transformation generated by the kernel phase polynomial.

    Given the quadratic polynomial f(x, z) of the coherent-state kernel and
    a reduced weight, returns the affine map ``kappa``, its linear part
    ``kappa_q`` and the linear functional ``m_l`` whose Hamilton vector is
    the translation, so that ``kappa = (translation by H_{m_l}) o kappa_q``.

    The map sends ``(y, -2i H^T z)`` to ``(x, -2i df/dx(x, z))`` where x
    solves ``df/dz(x, z) = H y``.

    Raises
    ------
    DegenerateFxz
        If the mixed block of f fails the singular gate (this contradicts
        the standing assumptions and signals an upstream failure).
    """
    if not phi0.is_reduced:
        raise NotReduced("build_kappa requires a Hermitian-reduced weight")
    n = phi0.n
    if f.n != n:
        raise ShapeMismatch("phase and weight dimensions differ")
    h = phi0.H
    g = f.mxz.T  # mixed block, rows z / cols x
    if linalg.smallest_singular_value(g) < eps_sing * max(
        linalg.spectral_norm(g), np.finfo(float).tiny
    ):
        raise DegenerateFxz("mixed block of the kernel phase is singular")

    ht_inv = linalg.inv(h.T, eps_sing=eps_sing)
    k11 = linalg.solve(g, h)  # x from y
    k12 = -0.5j * linalg.solve(g, f.mzz @ ht_inv)  # x from eta
    top = np.hstack([k11, k12])
    bottom = np.hstack([-2j * (f.mxx @ k11), -2j * (f.mxx @ k12) + f.mxz @ ht_inv])
    mq = np.vstack([top, bottom])
    kappa_q = AffineSymplecticMap(mq, np.zeros(2 * n, dtype=complex))

    g_inv_lz = linalg.solve(g, f.lz)
    m_l = LinearFunctional2n(-2j * (f.mxx @ g_inv_lz - f.lx), -g_inv_lz)
    kappa = AffineSymplecticMap(mq, m_l.hamilton())

    # cross-check the assembled affine map against direct evaluation
    rng = np.random.default_rng(2)
    for _ in range(5):
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = linalg.solve(g, h @ y - f.mzz @ z - f.lz)
        xi = -2j * (f.mxx @ x + f.mxz @ z + f.lx)
        src = np.concatenate([y, -2j * (h.T @ z)])
        dst = np.concatenate([x, xi])
        err = np.linalg.norm(kappa.apply(src) - dst)
        if err > 1e-9 * max(1.0, float(np.linalg.norm(dst))):
            raise NumericalFailure("affine map disagrees with direct evaluation")
    return kappa, kappa_q, m_l


def build_kappa_tilde(
    fquad: HoloQuadratic2n,
    alpha: LinearFunctional2n,
    eps_sing: float = linalg.EPS_SING,
):
    """Canonical transformation generated by the phase of the symbol.

    ``fquad`` is the quadratic part F (in the variables (x, xi)) and
    ``alpha`` the linear part of the phase.  With the fundamental matrix
    ``G = J Hess(F)`` (so that ``H_F(rho) = G rho``), the linear map is the
    Cayley-type quotient

        kappa_F : (1 + G/2) rho  |->  (1 - G/2) rho,

    and the full map is ``kappa_alpha o kappa_F`` where ``kappa_alpha``
    translates by ``-1/2 H_{alpha o kappa_F^{-1} + alpha}``.

    Returns ``(kappa_tilde, kappa_f, fundamental_matrix)``.

    Raises
    ------
    NotBijective
        If either gate ``det(1 +/- G/2) != 0`` fails; for a genuine phase
        this contradicts the map being affine-canonical.
    """
    n = fquad.n
    if alpha.n != n:
        raise ShapeMismatch("quadratic and linear phase dimensions differ")
    if float(np.linalg.norm(fquad.linear())) > 1e-12 * max(
        linalg.spectral_norm(fquad.hessian()), 1.0
    ):
        raise PreconditionViolated("quadratic part must have no linear terms")
    j = symplectic_j(n)
    fund = j @ fquad.hessian()
    eye = np.eye(2 * n, dtype=complex)
    plus = eye + 0.5 * fund
    minus = eye - 0.5 * fund
    for gate in (plus, minus):
        if linalg.smallest_singular_value(gate) < eps_sing * max(
            linalg.spectral_norm(gate), np.finfo(float).tiny
        ):
            raise NotBijective("Cayley gate det(1 +/- G/2) failed")
    mf = np.linalg.solve(plus.T, minus.T).T  # (1 - G/2)(1 + G/2)^{-1}
    kappa_f = AffineSymplecticMap(mf, np.zeros(2 * n, dtype=complex))
    g_comp = np.linalg.solve(mf.T, alpha.vector())  # alpha o kappa_F^{-1}
    t = -0.5 * (j @ (g_comp + alpha.vector()))
    kappa_tilde = AffineSymplecticMap(mf, t)
    return kappa_tilde, kappa_f, fund


def image_plane(kappa_q: AffineSymplecticMap, phi0: WeightForm, eps_sing: float = linalg.EPS_SING) -> WeightForm:
    """Weight of the image plane kappa_q(Lambda_phi0).

    The image of a graph plane under a linear canonical map is again
    I-Lagrangian and R-symplectic; when it projects bijectively onto the
    base variables it is the graph plane of a (possibly indefinite) weight,
    which is returned.

    Raises
    ------
    PreconditionViolated
        If ``kappa_q`` is not linear.
    NotAGraph
        If the realified base projection of the image is singular.
    """
    if not kappa_q.is_linear:
        raise PreconditionViolated("image_plane expects a linear map")
    n = phi0.n
    plane = LagrangianPlane(phi0)
    v = kappa_q.m @ plane.basis
    x_part, xi_part = v[:n], v[n:]
    x_real = np.vstack([x_part.real, x_part.imag])
    if linalg.smallest_singular_value(x_real) < eps_sing * max(
        linalg.spectral_norm(x_real), np.finfo(float).tiny
    ):
        raise NotAGraph("image plane does not project onto the base variables")
    t_map = xi_part @ np.linalg.inv(x_real)  # xi as a real-linear map of x
    p, nmat = linalg.split_real_linear(t_map)
    s1 = 0.5j * p
    h1 = (0.5j * nmat).T
    scale = max(linalg.spectral_norm(h1), linalg.spectral_norm(s1), 1.0)
    if linalg.spectral_norm(h1 - h1.conj().T) > 1e-8 * scale:
        raise NumericalFailure("image plane is not the graph of a real weight")
    if linalg.spectral_norm(s1 - s1.T) > 1e-8 * scale:
        raise NumericalFailure("image plane pluriharmonic part is not symmetric")
    phi1 = WeightForm(linalg.herm(h1), linalg.sym(s1))
    # plane equality check on the realified basis
    img_plane = LagrangianPlane(phi1)
    for col in range(2 * n):
        x = v[:n, col]
        expected = img_plane.point(x)
        if np.linalg.norm(v[:, col] - expected) > 1e-8 * max(1.0, float(np.linalg.norm(expected))):
            raise NumericalFailure("image basis point is not on the reconstructed plane")
    return phi1


def positivity_class(
    fquad: HoloQuadratic2n,
    phi0: WeightForm,
    tau: float = TAU_DEFAULT,
) -> PositivityResult:
    """Classify Im F restricted to the graph plane of ``phi0``.

    The restriction is a real quadratic form on R^{2n}; its eigenvalues are
    compared against two bands: ``zero_band``, the floating-point noise
    floor of the restriction (eigenvalues inside count as exact zeros), and
    ``tau_band = tau * norm``, the user tolerance.  Eigenvalues falling
    between the two bands make the strict inequalities undecidable and the
    classification ``MARGINAL``.
    """
    plane = LagrangianPlane(phi0)
    c = plane.restrict_quadratic(fquad)
    g = c.imag
    g = 0.5 * (g + g.T)
    w, vecs = linalg.eig_hermitian_real(g)
    ref = linalg.spectral_norm(c)
    zero_band = ZERO_FLOOR * ref
    tau_band = tau * linalg.spectral_norm(g)
    band = max(zero_band, tau_band)
    lam_min = float(w[0])

    if lam_min > band:
        cls = Positivity.STRICTLY_POSITIVE
    elif lam_min < -band:
        cls = Positivity.NOT_POSITIVE
    else:
        inside = w[np.abs(w) <= band]
        # every in-band eigenvalue must be an exact zero, otherwise the
        # strict inequalities cannot be decided at this tolerance
        if np.all(np.abs(inside) <= max(zero_band, np.finfo(float).tiny)):
            cls = Positivity.POSITIVE
        else:
            cls = Positivity.MARGINAL
    return PositivityResult(cls, w, vecs, g, lam_min, ref, zero_band, tau_band)


def intersection_kernel(
    fquad: HoloQuadratic2n,
    alpha: LinearFunctional2n,
    phi0: WeightForm,
    tau: float = TAU_DEFAULT,
    positivity: PositivityResult | None = None,
):
    """Kernel of Im F on the graph plane and the vanishing test for alpha.

    Returns ``(kernel_basis, vanishes, rel_margin)`` where the kernel basis
    spans the zero set of Im F restricted to the plane (realified
    coordinates), ``vanishes`` says whether Im alpha is zero on every
    kernel vector at relative tolerance ``tau``, and ``rel_margin`` is the
    largest relative violation.

    Raises
    ------
    PreconditionViolated
        When the restriction is not positive semi-definite.
    """
    pos = positivity if positivity is not None else positivity_class(fquad, phi0, tau)
    if pos.classification not in (Positivity.POSITIVE, Positivity.STRICTLY_POSITIVE):
        raise PreconditionViolated("intersection kernel requires a positive restriction")
    kernel = pos.kernel() if pos.classification is Positivity.POSITIVE else np.zeros(
        (2 * phi0.n, 0)
    )
    plane = LagrangianPlane(phi0)
    g = plane.restrict_linear(alpha).imag
    scale = max(float(np.linalg.norm(plane.restrict_linear(alpha))), np.finfo(float).tiny)
    if kernel.shape[1] == 0:
        return kernel, True, 0.0
    values = g @ kernel
    rel_margin = float(np.max(np.abs(values)) / scale) if alpha.norm() > 0 else 0.0
    return kernel, bool(rel_margin <= tau), rel_margin


@dataclass(frozen=True)
class AntilinearIntersection:
    """Realified solution set of ``(1 - |gamma|^2) y = 4 |gamma|^2 A conj(y)``."""

    matrix: np.ndarray
    kernel: np.ndarray

    @property
    def dim(self) -> int:
        return self.kernel.shape[1]


def antilinear_intersection(gamma: complex, a: np.ndarray, tol: float = 1e-9) -> AntilinearIntersection:
    """Solve the antilinear intersection equation of the model family.

    The equation ``rho0 y = A~ conj(y)`` with ``rho0 = 1 - |gamma|^2`` and
    ``A~ = 4 |gamma|^2 A`` is realified to the symmetric system

        [[rho0 I - A1, -A2], [-A2, rho0 I + A1]] (u, v) = 0,

    whose kernel is returned as orthonormal columns.
    """
    a = linalg.as_matrix(a, square=True)
    n = a.shape[0]
    rho0 = 1.0 - abs(gamma) ** 2
    at = 4.0 * abs(gamma) ** 2 * a
    a1, a2 = at.real, at.imag
    i = np.eye(n)
    r = np.block([[rho0 * i - a1, -a2], [-a2, rho0 * i + a1]])
    w, vecs = linalg.eig_hermitian_real(0.5 * (r + r.T))
    scale = max(linalg.spectral_norm(r), 1.0)
    mask = np.abs(w) <= tol * scale
    return AntilinearIntersection(r, vecs[:, mask])


def intersection_plane_eq(
    kappa_q: AffineSymplecticMap,
    phi0: WeightForm,
    tol: float = 1e-9,
) -> AntilinearIntersection:
    """Intersection of the image plane with the model plane, in closed form.

    Only valid for the model weight ``|x|^2 / 4`` and a linear map of the
    explicit-family shape ``(y, eta) -> (y / gamma - 8 i gamma A eta,
    gamma eta)``; ``gamma`` and ``A`` are read off the matrix blocks.
    """
    n = phi0.n
    if linalg.spectral_norm(phi0.H - 0.25 * np.eye(n)) > 1e-12 or not phi0.is_reduced:
        raise PreconditionViolated("closed-form intersection needs the model weight")
    m = kappa_q.m
    lower_left = m[n:, :n]
    if linalg.spectral_norm(lower_left) > 1e-10 * max(linalg.spectral_norm(m), 1.0):
        raise PreconditionViolated("map is not of the explicit-family shape")
    gamma_block = m[n:, n:]
    gamma = complex(np.trace(gamma_block) / n)
    if linalg.spectral_norm(gamma_block - gamma * np.eye(n)) > 1e-9 * max(abs(gamma), 1.0):
        raise PreconditionViolated("lower-right block is not scalar")
    a = m[:n, n:] / (-8j * gamma)
    return antilinear_intersection(gamma, a, tol=tol)
