"""Shared independent oracles for the test suite."""

import warnings

import numpy as np
import pytest
from scipy.integrate import IntegrationWarning, quad


def beta_integral_quad(x, a, b):
    """Regularized incomplete beta by adaptive quadrature (oracle).

    Integrates the smaller side and complements, so endpoint
    singularities never meet large mass.  Roundoff warnings at the
    requested 1e-13 tolerance are expected; accuracy is checked by the
    comparisons that consume this oracle.
    """
    import mpmath as mp

    lnb = float(mp.log(mp.beta(a, b)))

    def integrand(t):
        return np.exp((a - 1.0) * np.log(t) + (b - 1.0) * np.log1p(-t) - lnb)

    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if x <= 0.5:
            val, _ = quad(integrand, 0.0, x, limit=300, epsabs=1e-13, epsrel=1e-13)
            return val
        val, _ = quad(integrand, x, 1.0, limit=300, epsabs=1e-13, epsrel=1e-13)
    return 1.0 - val


def cofactor_det(m):
    """Determinant by recursive cofactor expansion (oracle; small matrices)."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1.0) ** j * m[0, j] * cofactor_det(minor)
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
