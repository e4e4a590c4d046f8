import numpy as np
import pytest

from bargtop import (
    NotReal,
    NotReduced,
    ShapeMismatch,
    WeightForm,
    hermitian_reduction,
    polarize,
    polarize_weight,
    realify,
    validate_instance,
)
from bargtop.forms import QuadraticSymbol

from conftest import cvec, random_instance, random_symbol, random_weight


def model_weight(n=1):
    return WeightForm(0.25 * np.eye(n), np.zeros((n, n)))


class TestPolarize:
    def test_zero(self):
        q = polarize(None, np.zeros((1, 1)), None, None, None)
        assert q.value([1.7 + 0.3j]) == 0

    def test_scalar_lambda(self):
        lam = 0.3 - 0.2j
        q = polarize(None, lam * np.eye(1), None, None, None)
        x = 1.1 - 0.4j
        assert abs(q.value([x]) - lam * abs(x) ** 2) < 1e-14
        assert np.allclose(q.qyt, [[lam]])

    def test_family_coefficients(self):
        # q = lam|x|^2 + A conj(x).conj(x) + conj(c).x - d.conj(x)
        lam, mu = 0.1 + 0.2j, 0.05 - 0.01j
        c, d = 0.3 + 0.4j, -0.2 + 0.6j
        q = polarize(None, lam * np.eye(1), 2 * mu * np.eye(1), [np.conj(c)], [-d], 0.0)
        x = 0.7 - 1.2j
        direct = lam * abs(x) ** 2 + mu * np.conj(x) ** 2 + np.conj(c) * x - d * np.conj(x)
        assert abs(q.value([x]) - direct) < 1e-14

    def test_restriction_sampling(self, rng):
        for n in (1, 2, 3):
            phi = random_weight(rng, n)
            q = random_symbol(rng, phi)
            for _ in range(20):
                x = cvec(rng, n)
                direct = (
                    0.5 * (q.qyy @ x) @ x
                    + (q.qyt @ x.conj()) @ x
                    + 0.5 * (q.qtt @ x.conj()) @ x.conj()
                    + q.a @ x
                    + q.b @ x.conj()
                    + q.q0
                )
                assert abs(q.value(x) - direct) <= 1e-12 * max(abs(direct), 1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            polarize(np.zeros((2, 2)), np.zeros((1, 1)), None, None, None)


class TestPolarizeWeight:
    def test_model(self):
        psi = polarize_weight(model_weight())
        # Psi0(x, y) = x y / 4
        assert abs(psi.value([2.0], [3.0]) - 1.5) < 1e-14

    def test_diagonal(self):
        phi = WeightForm(np.diag([1.0, 2.0]), np.zeros((2, 2)))
        psi = polarize_weight(phi)
        x, y = np.array([1.0, 1.0]), np.array([1.0, 1.0])
        assert abs(psi.value(x, y) - 3.0) < 1e-14
        assert np.allclose(psi.mxz, np.diag([1.0, 2.0]).T)

    def test_not_reduced(self):
        phi = WeightForm(np.eye(1), 0.5 * np.eye(1))
        with pytest.raises(NotReduced):
            polarize_weight(phi)


class TestValidate:
    def test_trivial_symbol(self):
        phi = model_weight()
        q = polarize(None, np.zeros((1, 1)), None, None, None)
        rep = validate_instance(phi, q)
        assert rep.ok
        assert abs(rep.majorization_margin - 0.25) < 1e-14
        assert abs(rep.strict_psh_margin - 0.25) < 1e-14
        assert abs(rep.nondegenerate_margin - 0.5) < 1e-14

    def test_family_hypothesis_region(self, rng):
        # Re(lam) + ||A|| < 1/4 keeps every check green
        lam, mu = 0.1 + 0.3j, 0.1
        q = polarize(None, lam * np.eye(1), 2 * mu * np.eye(1), None, None)
        rep = validate_instance(model_weight(), q)
        assert rep.ok

    def test_majorization_fails_at_half(self):
        q = polarize(None, 0.5 * np.eye(1), None, None, None)
        rep = validate_instance(model_weight(), q)
        assert not rep.majorization
        assert rep.majorization_margin <= -0.25 + 1e-14

    def test_strict_psh_matches_realified_definiteness(self, rng):
        for _ in range(10):
            phi = random_weight(rng, 2, pluriharmonic=False)
            q = random_symbol(rng, phi)
            rep = validate_instance(phi, q)
            ev = np.linalg.eigvalsh(phi.realified().s)
            assert rep.strict_psh == (ev[0] > 0)
            assert abs(rep.strict_psh_margin - ev[0]) <= 1e-10 * max(1.0, abs(ev[0]))


class TestRealify:
    def test_modulus_squared(self):
        r = realify(None, np.eye(1), None, None, None, 0.0)
        assert np.allclose(r.s, np.eye(2))

    def test_re_x_squared(self):
        r = realify(np.eye(1), None, np.eye(1), None, None, 0.0)
        assert np.allclose(r.s, np.diag([1.0, -1.0]))

    def test_majorization_gap(self):
        # |x|^2/4 minus Re(0.1 |x|^2) = 0.15 |x|^2
        r = realify(None, (0.25 - 0.1) * np.eye(1), None, None, None, 0.0)
        assert np.allclose(r.s, 0.15 * np.eye(2))

    def test_random_pointwise(self, rng):
        n = 2
        cxx = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        cxx = 0.5 * (cxx + cxx.T)
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (h + h.conj().T)
        lx = cvec(rng, n)
        r = realify(cxx, h, cxx.conj(), lx, lx.conj(), 1.25)
        for _ in range(20):
            x = cvec(rng, n)
            direct = (
                0.5 * (cxx @ x) @ x
                + (h @ x.conj()) @ x
                + 0.5 * (cxx.conj() @ x.conj()) @ x.conj()
                + lx @ x
                + lx.conj() @ x.conj()
                + 1.25
            ).real
            got = r.value(np.concatenate([x.real, x.imag]))
            assert abs(got - direct) <= 1e-12 * max(abs(direct), 1.0)

    def test_not_real(self):
        with pytest.raises(NotReal):
            realify(np.eye(1), None, 2 * np.eye(1), None, None, 0.0)


class TestHermitianReduction:
    def test_already_reduced(self):
        phi = model_weight()
        reduced, shear = hermitian_reduction(phi)
        assert reduced.is_reduced
        assert np.allclose(shear.m, np.eye(2))

    def test_graph_points_map(self, rng):
        phi = random_weight(rng, 2, pluriharmonic=True)
        reduced, shear = hermitian_reduction(phi)
        assert reduced.is_reduced
        for _ in range(10):
            x = cvec(rng, 2)
            src = np.concatenate([x, -2j * phi.gradient(x)])
            dst = np.concatenate([x, -2j * reduced.gradient(x)])
            assert np.linalg.norm(shear.apply(src) - dst) <= 1e-10 * max(
                1.0, np.linalg.norm(dst)
            )

    def test_explicit_scalar_case(self):
        # Phi0 = |x|^2/4 + Re(x^2/2): S = 1/2, shear lower block -A = 2iS = i
        phi = WeightForm(0.25 * np.eye(1), 0.5 * np.eye(1))
        reduced, shear = hermitian_reduction(phi)
        assert np.allclose(reduced.H, 0.25 * np.eye(1))
        assert np.allclose(shear.m[1, 0], 1j)

    def test_idempotent(self, rng):
        phi = random_weight(rng, 2, pluriharmonic=True)
        reduced, _ = hermitian_reduction(phi)
        again, shear2 = hermitian_reduction(reduced)
        assert np.allclose(again.H, reduced.H)
        assert np.allclose(shear2.m, np.eye(4))

    def test_reduction_preserves_validation(self, rng):
        phi, q = random_instance(rng, 2, pluriharmonic=True)
        reduced, _ = hermitian_reduction(phi)
        assert validate_instance(reduced, q).ok == validate_instance(phi, q).ok


class TestWeightForm:
    def test_value_real(self, rng):
        phi = random_weight(rng, 3, pluriharmonic=True)
        x = cvec(rng, 3)
        v = phi.value(x)
        assert isinstance(v, float)
        direct = ((phi.H @ x) @ x.conj()).real + ((phi.S @ x) @ x).real
        assert abs(v - direct) < 1e-12 * max(abs(direct), 1.0)

    def test_indefinite_hermitian_part_allowed(self):
        # image planes of non-positive maps need this
        phi = WeightForm(-0.25 * np.eye(1), np.zeros((1, 1)))
        assert phi.value([1.0]) == -0.25

    def test_q0_only_affects_constants(self, rng):
        phi = model_weight()
        q1 = random_symbol(rng, phi)
        q2 = QuadraticSymbol(q1.qyy, q1.qyt, q1.qtt, q1.a, q1.b, q1.q0 + 3.7j)
        r1, r2 = validate_instance(phi, q1), validate_instance(phi, q2)
        assert r1 == r2
