import math

import numpy as np
import pytest

SQRT_PI = math.sqrt(math.pi)
INV_SQRT2 = 1.0 / math.sqrt(2.0)


def brute_theta(z, tau, half_width=200):
    """Independent Jacobi theta oracle: direct partial sums of the series."""
    total = 0j
    for m in range(-half_width, half_width + 1):
        total += np.exp(1j * np.pi * m * m * tau + 2j * np.pi * m * z)
    return total


def brute_siegel_2d(z, tau, half_width=60):
    """Independent 2-D Siegel theta oracle: double lattice sum."""
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    total = 0j
    for m1 in range(-half_width, half_width + 1):
        for m2 in range(-half_width, half_width + 1):
            m = np.array([m1, m2])
            total += np.exp(2j * np.pi * (0.5 * (m @ tau @ m) + m @ z))
    return total


def simpson_integral(f, a, b, n=4001):
    """Composite-Simpson quadrature oracle (n odd)."""
    if n % 2 == 0:
        n += 1
    x = np.linspace(a, b, n)
    h = (b - a) / (n - 1)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return (w * f(x)).sum() * h / 3.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
