"""Roots of unity and the coefficient tables of the sparse exponential series.

The residue-``j`` sparse series is a combination ``sum_n C[n, j] exp(lam_n z)``
over the ``N`` roots of unity ``lam_n``. The weights are fixed by matching the
Kronecker-delta initial values at ``z = 0``, which is a Vandermonde system in
the roots.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DegenerateSystemError, InvalidOrderError, InvalidResidueError

__all__ = [
    "RootSet",
    "CoefficientTable",
    "InitSystem",
    "roots_of_unity",
    "build_init_system",
    "solve_coeffs",
    "coeffs_analytic",
]

# Reciprocal condition number below which the initial-value system is rejected.
_RCOND_MIN = 1e-12

_QUARTER_TURNS = (
    complex(1.0, 0.0),
    complex(0.0, 1.0),
    complex(-1.0, 0.0),
    complex(0.0, -1.0),
)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


def _check_order(order) -> int:
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise InvalidOrderError(f"order must be an integer, got {order!r}")
    if order < 1:
        raise InvalidOrderError(f"order must be >= 1, got {order}")
    return int(order)


@functools.lru_cache(maxsize=4096)
def _unit_power(p: int, order: int) -> complex:
    """exp(2 pi i p / order), correctly rounded to double."""
    p %= order
    if (4 * p) % order == 0:
        return _QUARTER_TURNS[(4 * p) // order]
    with mpmath.workdps(30):
        turn = mpmath.mpf(2 * p) / order
        return complex(float(mpmath.cospi(turn)), float(mpmath.sinpi(turn)))


@dataclass(frozen=True)
class RootSet:
    """The ``order`` roots ``lam_n = exp(2 pi i n / order)`` for n = 1..order."""

    order: int
    roots: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "roots", _frozen(self.roots))
        if self.roots.shape != (self.order,):
            raise InvalidOrderError("root count does not match order")

    def power(self, n: int, i: int) -> complex:
        """``lam_n ** i`` for 1-based branch index ``n``, any integer ``i``."""
        return _unit_power(n * i, self.order)


@dataclass(frozen=True)
class CoefficientTable:
    """``entries[n - 1, j]`` holds ``C[n, j]``, n = 1..order, j = 0..order-1."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))
        if self.entries.shape != (self.order, self.order):
            raise InvalidOrderError("coefficient table must be order x order")

    def coefficient(self, n: int, j: int) -> complex:
        if not 1 <= n <= self.order:
            raise InvalidOrderError(f"branch index n={n} outside 1..{self.order}")
        if not 0 <= j < self.order:
            raise InvalidResidueError(f"residue j={j} outside 0..{self.order - 1}")
        return complex(self.entries[n - 1, j])

    def column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.order:
            raise InvalidResidueError(f"residue j={j} outside 0..{self.order - 1}")
        return self.entries[:, j]


@dataclass(frozen=True)
class InitSystem:
    """Initial-value system ``matrix @ C[:, residue] = rhs``.

    ``matrix[i, n - 1] = lam_n ** i`` and ``rhs[i] = delta(i, residue)``.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "rhs", _frozen(self.rhs))


def roots_of_unity(order: int) -> RootSet:
    """Return the ``order``-th roots of unity, ``lam_order == 1`` exactly.

    Each root is computed from its own angle rather than by accumulating
    products, so the error does not grow with ``n``; the angle is evaluated
    in multiprecision so every component is correctly rounded.
    """
    order = _check_order(order)
    roots = [_unit_power(n, order) for n in range(1, order + 1)]
    return RootSet(order=order, roots=np.array(roots))


def build_init_system(roots: RootSet, j: int) -> InitSystem:
    order = roots.order
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)) or not 0 <= j < order:
        raise InvalidResidueError(f"residue j={j!r} outside 0..{order - 1}")
    matrix = np.array(
        [[roots.power(n, i) for n in range(1, order + 1)] for i in range(order)]
    )
    rhs = np.zeros(order, dtype=np.complex128)
    rhs[j] = 1.0
    return InitSystem(matrix=matrix, rhs=rhs, residue=int(j))


def solve_coeffs(order: int) -> CoefficientTable:
    """Solve the ``order`` initial-value systems for the coefficient table.

    Each residue is an independent dense solve (LAPACK ``gesv``, partial
    pivoting).

    Raises
    ------
    DegenerateSystemError
        If the Vandermonde matrix is numerically singular. Distinct roots
        make this impossible in exact arithmetic.
    """
    roots = roots_of_unity(order)
    entries = np.empty((roots.order, roots.order), dtype=np.complex128)
    for j in range(roots.order):
        system = build_init_system(roots, j)
        if j == 0:
            rcond = 1.0 / np.linalg.cond(system.matrix)
            if not rcond > _RCOND_MIN:
                raise DegenerateSystemError(
                    f"initial-value system for order {order} is singular (rcond={rcond:.3e})"
                )
        try:
            entries[:, j] = np.linalg.solve(system.matrix, system.rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateSystemError(str(exc)) from exc
    return CoefficientTable(order=roots.order, entries=entries)


def coeffs_analytic(order: int) -> CoefficientTable:
    """Closed-form table ``C[n, j] = lam_n ** -j / order``.

    The Vandermonde matrix of the roots of unity is ``sqrt(order)`` times a
    unitary DFT matrix, so its inverse is its conjugate transpose over
    ``order``. Used as an independent check on :func:`solve_coeffs`.
    """
    roots = roots_of_unity(order)
    n_ = roots.order
    entries = np.array(
        [[roots.power(n, -j) / n_ for j in range(n_)] for n in range(1, n_ + 1)]
    )
    return CoefficientTable(order=n_, entries=entries)
