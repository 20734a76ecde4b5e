"""Sparse exponential series and the scalar propagator kernel.

``y_j(z) = sum_{k = j mod N} z**k / k!`` keeps every ``N``-th term of the
exponential series. It solves ``y^(N) = y`` and therefore equals a
combination of ``exp(lam_n z)`` over the ``N``-th roots of unity.

The kernel ``phi_j(tau, g) = sum_m g**m tau**(N m + j) / (N m + j)!`` folds
the fractional prefactor ``g**(-j/N)`` of the closed form into a function
that is entire in ``g``, so a singular operator is not a special case.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass, replace
from typing import Callable

import mpmath
import numpy as np

from .errors import (
    ConfigurationError,
    InvalidOrderError,
    InvalidResidueError,
    KernelOverflowError,
    NonConvergenceError,
)
from .roots import CoefficientTable, roots_of_unity, solve_coeffs

__all__ = [
    "DEFAULT_TOLERANCE",
    "DEFAULT_MAX_TERMS",
    "SWITCH_THRESHOLD",
    "Method",
    "SeriesParams",
    "KernelArgs",
    "yj_series",
    "yj_closed",
    "yj_derivative",
    "yj_hybrid",
    "principal_root",
    "phi_series",
    "phi_closed",
    "phi_kernel",
    "evaluate_kernel",
    "phi_kernel_precise",
    "default_coeffs",
]

DEFAULT_TOLERANCE = 1e-15
DEFAULT_MAX_TERMS = 1000
# Kernel uses the series when |g tau^N| <= SWITCH_THRESHOLD, the closed form otherwise.
SWITCH_THRESHOLD = 1.0
# Number of consecutive negligible terms that ends a series.
_SMALL_RUN = 3
_EXP_LIMIT = math.log(np.finfo(np.float64).max)

# When set, every closed-form kernel evaluation is repeated on all N root
# branches and the results are asserted equal.
CHECK_BRANCHES = False
BRANCH_RTOL = 1e-11


class Method(str, enum.Enum):
    SERIES = "series"
    CLOSED = "closed"


@dataclass(frozen=True)
class SeriesParams:
    """Order, residue and truncation controls shared by the series evaluators."""

    order: int
    residue: int = 0
    tolerance: float = DEFAULT_TOLERANCE
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        if isinstance(self.order, bool) or not isinstance(self.order, (int, np.integer)):
            raise InvalidOrderError(f"order must be an integer, got {self.order!r}")
        if self.order < 1:
            raise InvalidOrderError(f"order must be >= 1, got {self.order}")
        if isinstance(self.residue, bool) or not isinstance(self.residue, (int, np.integer)):
            raise InvalidResidueError(f"residue must be an integer, got {self.residue!r}")
        if not 0 <= self.residue < self.order:
            raise InvalidResidueError(
                f"residue {self.residue} outside 0..{self.order - 1}"
            )
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_terms < 1:
            raise ConfigurationError(f"max_terms must be >= 1, got {self.max_terms}")

    def with_residue(self, residue: int) -> "SeriesParams":
        return replace(self, residue=residue)


@dataclass(frozen=True)
class KernelArgs:
    tau: complex
    g: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "g", complex(self.g))
        if not (cmath.isfinite(self.tau) and cmath.isfinite(self.g)):
            raise ConfigurationError(f"kernel arguments must be finite: {self!r}")


@functools.lru_cache(maxsize=None)
def default_coeffs(order: int) -> CoefficientTable:
    """Cached :func:`solve_coeffs` table (tables are immutable)."""
    return solve_coeffs(order)


@functools.lru_cache(maxsize=None)
def _roots(order: int) -> np.ndarray:
    return roots_of_unity(order).roots


def _check_table(params: SeriesParams, coeffs: CoefficientTable) -> None:
    if coeffs.order != params.order:
        raise ConfigurationError(
            f"coefficient table has order {coeffs.order}, parameters have order {params.order}"
        )


def accumulate(
    first,
    step: Callable,
    magnitude: Callable,
    tolerance: float,
    max_terms: int,
    what: str,
):
    """Sum ``first, step(first, 1), step(., 2), ...`` until the terms die out.

    Stops once ``_SMALL_RUN`` consecutive terms satisfy
    ``magnitude(term) <= tolerance * (1 + magnitude(partial_sum))``.
    Works for scalars of any numeric type and for matrices.
    """
    total = first
    term = first
    run = 1 if magnitude(term) <= tolerance * (1 + magnitude(total)) else 0
    count = 1
    while run < _SMALL_RUN:
        if count >= max_terms:
            raise NonConvergenceError(
                f"{what} did not converge within {max_terms} terms",
                partial_sum=total,
                last_term=float(magnitude(term)),
                terms=count,
            )
        term = step(term, count)
        total = total + term
        count += 1
        if not math.isfinite(magnitude(total)):
            raise NonConvergenceError(
                f"{what} left the floating-point range",
                partial_sum=total,
                last_term=float(magnitude(term)),
                terms=count,
            )
        if magnitude(term) <= tolerance * (1 + magnitude(total)):
            run += 1
        else:
            run = 0
    return total


def _leading_term(x, j: int):
    """x**j / j! built by successive division (no factorial overflow)."""
    term = x ** 0
    for l in range(1, j + 1):
        term = term * x / l
    return term


def _sparse_sum(x, factor, order: int, residue: int, tolerance, max_terms, what, magnitude=abs):
    """sum_m factor**m x**(N m + j) / (N m + j)!, given x and factor = c x**N."""

    def step(term, m):
        k = order * (m - 1) + residue
        term = term * factor
        for l in range(1, order + 1):
            term = term / (k + l)
        return term

    return accumulate(
        _leading_term(x, residue), step, magnitude, tolerance, max_terms, what
    )


def yj_series(z: complex, params: SeriesParams) -> complex:
    """Sparse exponential series by direct term recurrence."""
    z = complex(z)
    return _sparse_sum(
        z, z**params.order, params.order, params.residue,
        params.tolerance, params.max_terms, "sparse exponential series",
    )


def _exp_combination(weights: np.ndarray, exponents: np.ndarray) -> complex:
    re = exponents.real
    worst = int(np.argmax(re))
    if re[worst] > _EXP_LIMIT:
        raise KernelOverflowError(branch=worst + 1, exponent=float(re[worst]))
    value = complex(np.dot(weights, np.exp(exponents)))
    if not cmath.isfinite(value):
        raise KernelOverflowError(branch=worst + 1, exponent=float(re[worst]))
    return value


def yj_closed(z: complex, params: SeriesParams, coeffs: CoefficientTable) -> complex:
    """``sum_n C[n, j] exp(lam_n z)``."""
    _check_table(params, coeffs)
    z = complex(z)
    return _exp_combination(coeffs.column(params.residue), _roots(params.order) * z)


def yj_derivative(
    z: complex,
    params: SeriesParams,
    order: int,
    coeffs: CoefficientTable | None = None,
) -> complex:
    """``d``-th derivative of ``y_j``: ``y_j' = y_{j-1}`` cyclically in the residue."""
    if order < 0:
        raise ConfigurationError(f"derivative order must be >= 0, got {order}")
    if coeffs is None:
        coeffs = default_coeffs(params.order)
    shifted = params.with_residue((params.residue - order) % params.order)
    return yj_closed(z, shifted, coeffs)


def principal_root(g: complex, order: int) -> complex:
    """Principal ``order``-th root, argument in (-pi/order, pi/order]."""
    g = complex(g)
    if g == 0:
        return 0j
    angle = math.atan2(g.imag, g.real)
    if angle == -math.pi:
        angle = math.pi
    return cmath.rect(abs(g) ** (1.0 / order), angle / order)


def phi_series(args: KernelArgs, params: SeriesParams) -> complex:
    return _sparse_sum(
        args.tau, args.g * args.tau**params.order, params.order, params.residue,
        params.tolerance, params.max_terms, "propagator kernel series",
    )


def phi_closed(
    args: KernelArgs,
    params: SeriesParams,
    coeffs: CoefficientTable,
    branch: int = 0,
) -> complex:
    """Closed form ``r**-j sum_n C[n, j] exp(lam_n tau r)``.

    ``r`` is the principal ``N``-th root of ``g`` rotated by
    ``exp(2 pi i branch / N)``. Every branch gives the same value in exact
    arithmetic because the sum runs over all rotations.
    """
    _check_table(params, coeffs)
    if args.g == 0:
        raise ConfigurationError("closed-form kernel needs g != 0; use the series")
    order, j = params.order, params.residue
    r = principal_root(args.g, order)
    if branch % order:
        r = r * complex(_roots(order)[branch % order - 1])
    exponents = _roots(order) * (args.tau * r)
    return _exp_combination(coeffs.column(j), exponents) * r ** (-j)


def evaluate_kernel(
    args: KernelArgs,
    params: SeriesParams,
    coeffs: CoefficientTable,
    threshold: float = SWITCH_THRESHOLD,
) -> tuple[complex, Method]:
    """Kernel value together with the evaluation route that produced it."""
    _check_table(params, coeffs)
    if args.g == 0 or abs(args.g * args.tau**params.order) <= threshold:
        return phi_series(args, params), Method.SERIES
    value = phi_closed(args, params, coeffs)
    if CHECK_BRANCHES:
        for k in range(1, params.order):
            other = phi_closed(args, params, coeffs, branch=k)
            assert abs(other - value) <= BRANCH_RTOL * (1 + abs(value)), (
                f"branch {k} disagrees: {other} vs {value}"
            )
    return value, Method.CLOSED


def phi_kernel(
    args: KernelArgs,
    params: SeriesParams,
    coeffs: CoefficientTable,
    threshold: float = SWITCH_THRESHOLD,
) -> complex:
    """Propagator kernel ``phi_j(tau, g)``.

    Sums the series when ``|g tau^N| <= threshold`` (or ``g == 0``) and uses
    the exponential closed form with the principal root otherwise.

    Raises
    ------
    NonConvergenceError
        Series path exhausted ``params.max_terms``.
    KernelOverflowError
        An exponential in the closed form exceeds double range.
    """
    return evaluate_kernel(args, params, coeffs, threshold)[0]


def yj_hybrid(
    z: complex, params: SeriesParams, coeffs: CoefficientTable
) -> tuple[complex, Method]:
    """``y_j(z)`` through the kernel switch, since ``y_j(z) = phi_j(z, 1)``."""
    return evaluate_kernel(KernelArgs(z, 1.0), params, coeffs)


def phi_kernel_precise(
    tau,
    g: complex,
    params: SeriesParams,
    coeffs: CoefficientTable,
    threshold: float = SWITCH_THRESHOLD,
) -> mpmath.mpc:
    """Kernel evaluated in the current mpmath working precision.

    Same route selection as :func:`phi_kernel`. The closed-form route
    reuses the double-precision coefficient table; any error there is a
    combination of exact exponential solutions, so it does not disturb
    finite-difference checks of the evolution equation.
    """
    order, j = params.order, params.residue
    tau = mpmath.mpmathify(tau)
    g = mpmath.mpc(g)
    if g == 0 or abs(g * tau**order) <= threshold:
        return _sparse_sum(
            tau, g * tau**order, order, j,
            mpmath.mpf(10) ** (-mpmath.mp.dps), max(params.max_terms, 4 * mpmath.mp.dps),
            "precise kernel series", magnitude=mpmath.fabs,
        )
    angle = mpmath.arg(g)
    if angle == -mpmath.pi:
        angle = mpmath.pi
    r = mpmath.root(mpmath.fabs(g), order) * mpmath.expjpi(angle / (order * mpmath.pi))
    total = mpmath.mpc(0)
    for n in range(1, order + 1):
        lam = mpmath.expjpi(mpmath.mpf(2 * n) / order)
        total += mpmath.mpc(complex(coeffs.entries[n - 1, j])) * mpmath.exp(lam * tau * r)
    return total * r ** (-j)
