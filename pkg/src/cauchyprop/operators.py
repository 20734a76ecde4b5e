"""Finite-dimensional operators and matrix-valued propagator kernels.

``phi_j(tau, G)`` is built two ways: through the eigendecomposition
``V diag(phi_j(tau, g_i)) V^-1`` and by summing the operator power series
directly. The second works for defective matrices and serves as the
reference for the first.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, IllConditionedDecompositionError
from .roots import CoefficientTable
from .sparse_exp import (
    KernelArgs,
    Method,
    SeriesParams,
    SWITCH_THRESHOLD,
    _leading_term,
    accumulate,
    phi_kernel,
)

__all__ = [
    "CONDITION_LIMIT",
    "LinearOperator",
    "Eigendecomposition",
    "eigendecompose",
    "kernel_values",
    "apply_kernel_matrix",
    "series_kernel_matrix",
    "max_norm",
]

# Eigenvector condition above which the closed form is abandoned.
CONDITION_LIMIT = 1e8

_KINDS = ("dense", "diagonal")


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class LinearOperator:
    """A dense ``d x d`` matrix or a diagonal spectral symbol of length ``d``."""

    kind: str
    dimension: int
    data: np.ndarray

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigurationError(f"operator kind must be one of {_KINDS}, got {self.kind!r}")
        data = _readonly(self.data)
        d = self.dimension
        if d < 1:
            raise ConfigurationError(f"dimension must be >= 1, got {d}")
        expected = (d, d) if self.kind == "dense" else (d,)
        if data.shape != expected:
            raise ConfigurationError(
                f"{self.kind} operator of dimension {d} needs data of shape "
                f"{expected}, got {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise ConfigurationError("operator data must be finite")
        object.__setattr__(self, "data", data)

    @classmethod
    def dense(cls, matrix) -> "LinearOperator":
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ConfigurationError(f"dense operator must be square, got shape {matrix.shape}")
        return cls("dense", matrix.shape[0], matrix)

    @classmethod
    def diagonal(cls, symbol) -> "LinearOperator":
        symbol = np.asarray(symbol)
        if symbol.ndim != 1:
            raise ConfigurationError(f"diagonal symbol must be 1-D, got shape {symbol.shape}")
        return cls("diagonal", symbol.shape[0], symbol)

    def matrix(self) -> np.ndarray:
        if self.kind == "dense":
            return self.data
        return np.diag(self.data)

    def apply(self, vector) -> np.ndarray:
        vector = np.asarray(vector, dtype=np.complex128)
        if self.kind == "dense":
            return self.data @ vector
        return self.data * vector

    def max_norm(self) -> float:
        return max_norm(self.data)

    @functools.cached_property
    def decomposition(self) -> "Eigendecomposition":
        return eigendecompose(self)


@dataclass(frozen=True)
class Eigendecomposition:
    values: np.ndarray
    vectors: np.ndarray
    inverse_vectors: np.ndarray
    condition: float


def eigendecompose(
    operator: LinearOperator, condition_limit: float = CONDITION_LIMIT
) -> Eigendecomposition:
    """Full complex eigendecomposition with a 1-norm condition estimate.

    Diagonal operators are returned as-is with identity eigenvectors.

    Raises
    ------
    IllConditionedDecompositionError
        The eigenvector matrix is singular or its condition
        ``||V||_1 ||V^-1||_1`` exceeds ``condition_limit`` (defective or
        nearly defective operator).
    """
    d = operator.dimension
    if operator.kind == "diagonal":
        eye = _readonly(np.eye(d))
        return Eigendecomposition(_readonly(operator.data), eye, eye, 1.0)
    values, vectors = np.linalg.eig(operator.data)
    try:
        inverse = np.linalg.inv(vectors)
    except np.linalg.LinAlgError:
        raise IllConditionedDecompositionError(float("inf")) from None
    condition = float(np.linalg.norm(vectors, 1) * np.linalg.norm(inverse, 1))
    if not np.isfinite(condition) or condition > condition_limit:
        raise IllConditionedDecompositionError(condition)
    return Eigendecomposition(
        _readonly(values), _readonly(vectors), _readonly(inverse), condition
    )


def kernel_values(
    values,
    tau: complex,
    params: SeriesParams,
    coeffs: CoefficientTable,
    threshold: float = SWITCH_THRESHOLD,
) -> np.ndarray:
    """Scalar kernel ``phi_j(tau, g)`` for each eigenvalue ``g``."""
    return np.array(
        [phi_kernel(KernelArgs(tau, g), params, coeffs, threshold) for g in values],
        dtype=np.complex128,
    )


def _kernel_matrix(
    operator: LinearOperator,
    tau: complex,
    params: SeriesParams,
    coeffs: CoefficientTable,
    fallback: bool,
) -> tuple[np.ndarray, Method]:
    d = operator.dimension
    tau = complex(tau)
    if tau == 0:
        # phi_j(0, G) = delta_{j0} I for every G; skip V V^-1 round-off.
        eye = np.eye(d, dtype=np.complex128)
        return (eye if params.residue == 0 else 0 * eye), Method.CLOSED
    if operator.kind == "diagonal":
        return np.diag(kernel_values(operator.data, tau, params, coeffs)), Method.CLOSED
    try:
        dec = operator.decomposition
    except IllConditionedDecompositionError as exc:
        if not fallback:
            raise
        warnings.warn(f"{exc}; falling back to the operator series", RuntimeWarning, stacklevel=3)
        return series_kernel_matrix(operator, tau, params), Method.SERIES
    phis = kernel_values(dec.values, tau, params, coeffs)
    return (dec.vectors * phis) @ dec.inverse_vectors, Method.CLOSED


def apply_kernel_matrix(
    operator: LinearOperator,
    tau: complex,
    params: SeriesParams,
    coeffs: CoefficientTable,
    fallback: bool = True,
) -> np.ndarray:
    """``phi_j(tau, G)`` through the eigendecomposition of ``G``.

    With ``fallback`` (the default) an ill-conditioned or defective ``G``
    is routed to :func:`series_kernel_matrix` with a ``RuntimeWarning``;
    otherwise the decomposition error propagates.
    """
    return _kernel_matrix(operator, tau, params, coeffs, fallback)[0]


def series_kernel_matrix(
    operator: LinearOperator, tau: complex, params: SeriesParams
) -> np.ndarray:
    """``tau^j sum_m (tau^N G)^m / (N m + j)!`` summed in matrix arithmetic.

    Truncation uses the max-abs entry of each term with the same stopping
    rule as the scalar series.
    """
    tau = complex(tau)
    order, j = params.order, params.residue
    d = operator.dimension
    factor = tau**order * operator.matrix()

    def step(term, m):
        k = order * (m - 1) + j
        term = term @ factor
        for l in range(1, order + 1):
            term = term / (k + l)
        return term

    first = _leading_term(tau, j) * np.eye(d, dtype=np.complex128)
    return accumulate(
        first, step, max_norm, params.tolerance, params.max_terms, "operator kernel series"
    )
