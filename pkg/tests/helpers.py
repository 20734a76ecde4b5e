"""Random problem generators and independent oracles shared across tests."""

import mpmath
import numpy as np

from cauchyprop.operators import LinearOperator
from cauchyprop.solver import CauchyProblem
from cauchyprop.wave import PeriodicProfile


def brute_sparse_sum(z, order, residue, terms=None):
    """sum_m z**(N m + j) / (N m + j)! term by term at 40 digits, exact factorials."""
    return brute_kernel(z, 1, order, residue, terms)


def brute_kernel(tau, g, order, residue, terms=None):
    """sum_m g**m tau**(N m + j) / (N m + j)! at 40 digits, exact factorials."""
    if terms is None:
        terms = 240 // order + 2
    with mpmath.workdps(40):
        tau, g = mpmath.mpc(complex(tau)), mpmath.mpc(complex(g))
        total = mpmath.mpc(0)
        for m in range(terms):
            k = order * m + residue
            total += g**m * tau**k / mpmath.factorial(k)
        return complex(total)


def complex_grid(half_width=5.0, points=21):
    axis = np.linspace(-half_width, half_width, points)
    return [complex(x, y) for x in axis for y in axis]


def random_similarity(rng, d, max_condition=100.0):
    """Random complex S with 1-norm condition number <= max_condition."""
    while True:
        s = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        if np.linalg.cond(s, 1) <= max_condition:
            return s


def random_diagonalizable(rng, d, radius=2.0, max_condition=100.0):
    values = rng.uniform(0, radius, d) * np.exp(1j * rng.uniform(-np.pi, np.pi, d))
    s = random_similarity(rng, d, max_condition)
    return s @ np.diag(values) @ np.linalg.inv(s)


def random_problem(rng, max_dim=8, max_order=4, radius=2.0):
    d = int(rng.integers(1, max_dim + 1))
    order = int(rng.integers(1, max_order + 1))
    g = random_diagonalizable(rng, d, radius)
    initial = [rng.normal(size=d) + 1j * rng.normal(size=d) for _ in range(order)]
    return CauchyProblem(order, LinearOperator.dense(g), initial, t0=float(rng.uniform(-1, 1)))


def band_limited(rng, m=64, kmax=8, zero_mean=False):
    """Real band-limited profile with random modes for |k| <= kmax."""
    modes = np.zeros(m, dtype=np.complex128)
    if not zero_mean:
        modes[0] = rng.normal() * m / 4
    for k in range(1, kmax + 1):
        c = (rng.normal() + 1j * rng.normal()) * m / 4
        modes[k] = c
        modes[-k] = np.conj(c)
    return PeriodicProfile.from_modes(modes)


def rel_max(a, b):
    """||a - b||_max / (1 + ||b||_max)."""
    a, b = np.asarray(a), np.asarray(b)
    return float(np.abs(a - b).max() / (1 + np.abs(b).max()))
