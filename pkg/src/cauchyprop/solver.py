"""Closed-form and series solutions of ``d^N u / dt^N = G u``.

The solution is ``u(t) = sum_j phi_j(t - t0, G) u_j`` where ``u_j`` is the
``j``-th time derivative at ``t0``. ``solve_closed`` builds the kernels
from the exponential closed form, ``solve_series`` from the truncated
operator power series.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ConfigurationError, IllConditionedDecompositionError
from .operators import LinearOperator, _kernel_matrix, max_norm, series_kernel_matrix
from .sparse_exp import (
    DEFAULT_MAX_TERMS,
    DEFAULT_TOLERANCE,
    Method,
    SeriesParams,
    default_coeffs,
    phi_kernel_precise,
)

__all__ = [
    "CauchyProblem",
    "SolutionSample",
    "InitialConditionReport",
    "solve_closed",
    "solve_series",
    "verify_initial_conditions",
    "verify_pde_residual",
    "fd_weights",
    "INIT_STEP",
    "INIT_TOLERANCE",
    "PDE_STEP",
    "PDE_TOLERANCE",
]

INIT_STEP = 1e-4
INIT_TOLERANCE = 1e-5
PDE_STEP = 1e-3
PDE_TOLERANCE = 1e-4
# Working precision (decimal digits) for finite-difference sampling.
PRECISE_DPS = 40


@dataclass(frozen=True)
class CauchyProblem:
    order: int
    operator: LinearOperator
    initial: tuple
    t0: float = 0.0

    def __post_init__(self):
        if isinstance(self.order, bool) or not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ConfigurationError(f"order must be a positive integer, got {self.order!r}")
        if len(self.initial) != self.order:
            raise ConfigurationError(
                f"order {self.order} problem needs {self.order} initial vectors, got {len(self.initial)}"
            )
        vectors = []
        for i, u in enumerate(self.initial):
            u = np.array(u, dtype=np.complex128)
            if u.shape != (self.operator.dimension,):
                raise ConfigurationError(
                    f"initial vector u_{i} has shape {u.shape}, operator dimension is "
                    f"{self.operator.dimension}"
                )
            u.flags.writeable = False
            vectors.append(u)
        object.__setattr__(self, "initial", tuple(vectors))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def dimension(self) -> int:
        return self.operator.dimension


@dataclass(frozen=True)
class SolutionSample:
    time: float
    state: np.ndarray
    method: Method


def _elapsed(problem: CauchyProblem, t: float, allow_backward: bool) -> float:
    tau = float(t) - problem.t0
    if tau < 0 and not allow_backward:
        raise ConfigurationError(
            f"t={t} precedes t0={problem.t0}; pass allow_backward=True to evolve backwards"
        )
    return tau


def _params(problem, j, tolerance, max_terms) -> SeriesParams:
    return SeriesParams(problem.order, j, tolerance, max_terms)


def solve_closed(
    problem: CauchyProblem,
    t: float,
    tolerance: float = DEFAULT_TOLERANCE,
    max_terms: int = DEFAULT_MAX_TERMS,
    allow_backward: bool = False,
) -> SolutionSample:
    """Evaluate ``u(t)`` with eigendecomposed closed-form kernels.

    A defective or ill-conditioned operator falls back to the series for
    every residue, and the sample is then tagged ``Method.SERIES``.
    """
    tau = _elapsed(problem, t, allow_backward)
    coeffs = default_coeffs(problem.order)
    state = np.zeros(problem.dimension, dtype=np.complex128)
    method = Method.CLOSED
    for j, u in enumerate(problem.initial):
        kernel, used = _kernel_matrix(
            problem.operator, tau, _params(problem, j, tolerance, max_terms), coeffs, fallback=True
        )
        if used is Method.SERIES:
            method = Method.SERIES
        state += kernel @ u
    return SolutionSample(time=float(t), state=state, method=method)


def solve_series(
    problem: CauchyProblem,
    t: float,
    tolerance: float = DEFAULT_TOLERANCE,
    max_terms: int = DEFAULT_MAX_TERMS,
    allow_backward: bool = False,
) -> SolutionSample:
    tau = _elapsed(problem, t, allow_backward)
    state = np.zeros(problem.dimension, dtype=np.complex128)
    for j, u in enumerate(problem.initial):
        state += series_kernel_matrix(
            problem.operator, tau, _params(problem, j, tolerance, max_terms)
        ) @ u
    return SolutionSample(time=float(t), state=state, method=Method.SERIES)


@functools.lru_cache(maxsize=None)
def fd_weights(derivative: int, offsets: tuple[int, ...]) -> tuple[Fraction, ...]:
    """Exact finite-difference weights for ``derivative`` on integer ``offsets``."""
    from sympy import finite_diff_weights

    table = finite_diff_weights(derivative, list(offsets), 0)
    return tuple(Fraction(int(w.p), int(w.q)) for w in table[derivative][-1])


def _central_offsets(order: int) -> tuple[int, ...]:
    half = (order + 1) // 2
    return tuple(range(-half, half + 1))


def _forward_offsets(order: int) -> tuple[int, ...]:
    return tuple(range(order + 2))


class _PreciseSampler:
    """Closed-form solution in eigen-coordinates at elevated precision.

    A finite difference of order ``k`` amplifies sampling noise by
    ``h^-k``, which swamps double precision for ``k >= 3``. Samples are
    taken per eigenvalue with mpmath, combined with the stencil, and only
    then mapped back through the (double) eigenvectors.
    """

    def __init__(self, problem: CauchyProblem, tolerance: float, max_terms: int, dps: int):
        dec = problem.operator.decomposition
        self.problem = problem
        self.dps = dps
        self.vectors = np.asarray(dec.vectors)
        self.values = [complex(g) for g in dec.values]
        self.coords = [np.asarray(dec.inverse_vectors) @ u for u in problem.initial]
        self.coeffs = default_coeffs(problem.order)
        self.params = [_params(problem, j, tolerance, max_terms) for j in range(problem.order)]
        self._cache: dict = {}

    def _modal(self, tau) -> list:
        key = mpmath.nstr(tau, self.dps)
        if key not in self._cache:
            out = []
            for i, g in enumerate(self.values):
                acc = mpmath.mpc(0)
                for j, params in enumerate(self.params):
                    c = complex(self.coords[j][i])
                    if c != 0:
                        acc += phi_kernel_precise(tau, g, params, self.coeffs) * mpmath.mpc(c)
                out.append(acc)
            self._cache[key] = out
        return self._cache[key]

    def derivative(self, tau: float, h: float, derivative: int, offsets) -> np.ndarray:
        with mpmath.workdps(self.dps):
            center, step = mpmath.mpf(tau), mpmath.mpf(h)
            acc = [mpmath.mpc(0)] * len(self.values)
            for off, w in zip(offsets, fd_weights(derivative, tuple(offsets))):
                if w == 0:
                    continue
                weight = mpmath.mpf(w.numerator) / w.denominator
                samples = self._modal(center + off * step)
                acc = [a + weight * s for a, s in zip(acc, samples)]
            scale = step**derivative
            modal = np.array([complex(a / scale) for a in acc], dtype=np.complex128)
        return self.vectors @ modal


def _double_derivative(problem, tau, h, derivative, offsets, tolerance, max_terms) -> np.ndarray:
    acc = np.zeros(problem.dimension, dtype=np.complex128)
    for off, w in zip(offsets, fd_weights(derivative, tuple(offsets))):
        if w:
            t = problem.t0 + tau + off * h
            acc += float(w) * solve_closed(problem, t, tolerance, max_terms).state
    return acc / h**derivative


def _derivative_estimator(problem, precision, tolerance, max_terms):
    if precision not in ("extended", "double"):
        raise ConfigurationError(f"precision must be 'extended' or 'double', got {precision!r}")
    if precision == "extended":
        try:
            sampler = _PreciseSampler(problem, tolerance, max_terms, PRECISE_DPS)
        except IllConditionedDecompositionError:
            sampler = None
        if sampler is not None:
            return sampler.derivative

    def estimate(tau, h, derivative, offsets):
        return _double_derivative(problem, tau, h, derivative, offsets, tolerance, max_terms)

    return estimate


@dataclass(frozen=True)
class InitialConditionReport:
    """Max-norm deviation of the estimated ``d^i u/dt^i (t0)`` from ``u_i``."""

    h: float
    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    def passed(self, tolerance: float = INIT_TOLERANCE) -> bool:
        return self.max_residual < tolerance


def verify_initial_conditions(
    problem: CauchyProblem,
    h: float = INIT_STEP,
    precision: str = "extended",
    tolerance: float = DEFAULT_TOLERANCE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> InitialConditionReport:
    """Check the initial data with second-order one-sided differences.

    Derivative ``i`` uses the forward stencil ``t0, t0 + h, ..., t0 + (i+1) h``;
    ``i = 0`` is a direct evaluation at ``t0``. With ``precision="extended"``
    the stencil samples are evaluated in multiprecision (diagonalizable
    operators only); ``"double"`` differences ``solve_closed`` output as is.
    """
    if not h > 0:
        raise ConfigurationError(f"step must be positive, got {h}")
    estimate = _derivative_estimator(problem, precision, tolerance, max_terms)
    residuals = []
    for i, u in enumerate(problem.initial):
        if i == 0:
            value = solve_closed(problem, problem.t0, tolerance, max_terms).state
        else:
            value = estimate(0.0, h, i, _forward_offsets(i))
        residuals.append(max_norm(value - u))
    return InitialConditionReport(h=float(h), residuals=tuple(residuals))


def verify_pde_residual(
    problem: CauchyProblem,
    t: float,
    h: float = PDE_STEP,
    precision: str = "extended",
    tolerance: float = DEFAULT_TOLERANCE,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> float:
    """Scaled residual of ``d^N u/dt^N = G u`` at time ``t``.

    The ``N``-th derivative is a second-order central difference of the
    closed-form solution. Returns
    ``||D_h^N u - G u||_max / (1 + ||G u||_max)``.
    """
    if not h > 0:
        raise ConfigurationError(f"step must be positive, got {h}")
    tau = float(t) - problem.t0
    if not tau > problem.order * h:
        raise ConfigurationError(
            f"t - t0 = {tau} must exceed N*h = {problem.order * h} for a central stencil"
        )
    estimate = _derivative_estimator(problem, precision, tolerance, max_terms)
    lhs = estimate(tau, h, problem.order, _central_offsets(problem.order))
    rhs = problem.operator.apply(solve_closed(problem, t, tolerance, max_terms).state)
    return max_norm(lhs - rhs) / (1 + max_norm(rhs))
