"""Shared samplers for the test suite.

All randomness is seeded through the ``rng`` fixture so runs are
reproducible; rejection sampling keeps every drawn instance safely away
from the decision boundaries unless a test asks otherwise.
"""

import numpy as np
import pytest

from bargtop import FamilyParams, QuadraticSymbol, WeightForm, validate_instance
from bargtop.forms import to_real_coords


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def cvec(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def cmat(rng, n, scale=1.0, symmetric=False):
    m = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return 0.5 * (m + m.T) if symmetric else m


def random_family(rng, n, margin=1e-6, lam_box=0.6, lin_scale=1.0, max_tries=200):
    """Family parameters with hypothesis and positivity margins above ``margin``."""
    for _ in range(max_tries):
        lam = complex(rng.uniform(-lam_box, 0.24), rng.uniform(-lam_box, lam_box))
        a = cmat(rng, n, symmetric=True)
        room = 0.25 - lam.real
        if room <= 2 * margin:
            continue
        na = np.linalg.norm(a, 2)
        if na > 0:
            a *= rng.uniform(0.0, 0.9) * room / na
        p = FamilyParams(lam, a, cvec(rng, n, lin_scale), cvec(rng, n, lin_scale))
        if p.hypothesis_margin > margin and abs(p.positivity_margin) > margin:
            return p
    raise RuntimeError("family sampler failed to find a valid instance")


def random_weight(rng, n, pluriharmonic=True, s_scale=0.25):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = x @ x.conj().T / n + 0.5 * np.eye(n)
    s = cmat(rng, n, scale=s_scale, symmetric=True) if pluriharmonic else np.zeros((n, n))
    return WeightForm(h, s)


def random_symbol(rng, phi, rel=0.5, lin_scale=1.0):
    """Symbol whose principal part stays below the Hermitian weight."""
    n = phi.n
    qyy = cmat(rng, n, symmetric=True)
    qyt = cmat(rng, n)
    qtt = cmat(rng, n, symmetric=True)
    herm = phi.herm_part().realified().s
    s_c, _, _ = to_real_coords(qyy, qyt, qtt, None, None, 0.0, n=n)
    lam_max = np.linalg.eigvalsh(s_c.real)[-1]
    lam_min_h = np.linalg.eigvalsh(herm)[0]
    t = rel * lam_min_h / max(lam_max, 1e-9) if lam_max > 0 else rel
    return QuadraticSymbol(
        t * qyy,
        t * qyt,
        t * qtt,
        cvec(rng, n, lin_scale),
        cvec(rng, n, lin_scale),
        complex(rng.standard_normal()),
    )


def random_instance(rng, n, pluriharmonic=True, rel=None, max_tries=200):
    """Validated (weight, symbol) pair with a general weight."""
    for _ in range(max_tries):
        phi = random_weight(rng, n, pluriharmonic=pluriharmonic)
        q = random_symbol(rng, phi, rel=float(rng.uniform(0.2, 0.9)) if rel is None else rel)
        if validate_instance(phi, q).ok:
            return phi, q
    raise RuntimeError("instance sampler failed to find a valid instance")


def relerr(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))
