"""Shared test helpers: KS statistics and oracle distributions.

Oracle-side code deliberately avoids the package's own samplers: analytic
CDFs come from scipy / closed forms, KS statistics from direct sorting.
"""

import math

import numpy as np
import pytest
from scipy.stats import invgauss, norm


def ks_statistic(samples, cdf):
    """sup |F_hat - F| for an analytic CDF, computed on sorted samples."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    f = cdf(x)
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return max(upper, lower)


def ks_two_sample(a, b):
    """Two-sample KS distance, direct evaluation."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def ks_critical(n, level=0.01):
    """Asymptotic KS critical distance at the given level."""
    c = math.sqrt(-0.5 * math.log(level / 2.0))
    return c / math.sqrt(n)


def inverse_gaussian_cdf(x, mu, lam):
    """CDF of I(mu, lam); scipy parametrization invgauss(mu/lam, scale=lam)."""
    return invgauss.cdf(x, mu / lam, scale=lam)


def constant_barrier_cdf(t, c=1.0):
    """Reflection-principle passage law to a constant barrier c:
    F(t) = 2*(1 - Phi(c/sqrt(t)))."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = 2.0 * (1.0 - norm.cdf(c / np.sqrt(t[pos])))
    return out


@pytest.fixture(scope="session")
def cpu_workers():
    import os

    return max(1, min(8, os.cpu_count() or 1))
