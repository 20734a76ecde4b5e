"""Order-N wave equation ``d^N u/dt^N = v^N d^N u/dx^N`` on a periodic grid.

Two routes to the same solution:

* spectral: the operator is diagonal in Fourier space with symbol
  ``v^N (i k)^N``, which is handed to the general Cauchy solver;
* shift: each initial profile is propagated along the ``N`` complex
  directions ``v tau lam_n``. On a periodic grid a complex shift of a
  band-limited profile is the Fourier multiplier ``exp(i k v tau lam_n)``,
  and the inverse operator power ``(v d/dx)^-j`` is ``(i k v)^-j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, MeanModeError
from .operators import LinearOperator
from .solver import CauchyProblem, solve_closed
from .sparse_exp import default_coeffs, _roots

__all__ = [
    "PeriodicProfile",
    "WaveProblem",
    "wavenumbers",
    "grid",
    "spectral_symbol",
    "wave_solve_spectral",
    "wave_solve_shift",
    "shift_terms",
    "dalembert_reference",
    "wave_energy",
    "make_profile",
]

_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _is_power_of_two(m: int) -> bool:
    return m >= 8 and m & (m - 1) == 0


def wavenumbers(m: int) -> np.ndarray:
    """Integer wavenumbers in FFT order: 0..M/2, then -M/2+1..-1."""
    k = np.arange(m)
    return np.where(k <= m // 2, k, k - m)


def grid(m: int) -> np.ndarray:
    return 2 * np.pi * np.arange(m) / m


@dataclass(frozen=True)
class PeriodicProfile:
    """Grid samples on ``x_m = 2 pi m / M``, optionally with exact modes.

    ``modes`` follows ``numpy.fft.fft`` normalisation. When given, they are
    taken as the authoritative representation, so band-limited data keeps
    exact zeros outside its band.
    """

    samples: np.ndarray
    modes: np.ndarray | None = None

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ConfigurationError("profile samples must be one-dimensional")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        if self.modes is not None:
            modes = np.array(self.modes, dtype=np.complex128)
            if modes.shape != samples.shape:
                raise ConfigurationError("profile modes and samples differ in length")
            m = len(samples)
            scale = max(1.0, float(np.abs(samples).max()))
            if np.abs(np.fft.fft(samples) - modes).max() > 1e-12 * m * scale:
                raise ConfigurationError("profile modes are not the transform of its samples")
            modes.flags.writeable = False
            object.__setattr__(self, "modes", modes)

    @classmethod
    def from_modes(cls, modes) -> "PeriodicProfile":
        modes = np.asarray(modes, dtype=np.complex128)
        return cls(np.fft.ifft(modes), modes)

    @property
    def size(self) -> int:
        return len(self.samples)

    def spectrum(self) -> np.ndarray:
        return self.modes if self.modes is not None else np.fft.fft(self.samples)


@dataclass(frozen=True)
class WaveProblem:
    order: int
    speed: float
    grid_size: int
    initial: tuple
    t0: float = 0.0

    def __post_init__(self):
        if not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ConfigurationError(f"order must be a positive integer, got {self.order!r}")
        if not _is_power_of_two(self.grid_size):
            raise ConfigurationError(f"grid size must be a power of two >= 8, got {self.grid_size}")
        if len(self.initial) != self.order:
            raise ConfigurationError(
                f"order {self.order} wave problem needs {self.order} profiles, got {len(self.initial)}"
            )
        profiles = tuple(
            p if isinstance(p, PeriodicProfile) else PeriodicProfile(p) for p in self.initial
        )
        for i, p in enumerate(profiles):
            if p.size != self.grid_size:
                raise ConfigurationError(
                    f"profile u_{i} has {p.size} samples, grid size is {self.grid_size}"
                )
        object.__setattr__(self, "initial", profiles)


def spectral_symbol(problem: WaveProblem) -> LinearOperator:
    """Diagonal symbol ``v^N (i k)^N`` of ``v^N d^N/dx^N``."""
    n = problem.order
    k = wavenumbers(problem.grid_size).astype(np.float64)
    symbol = problem.speed**n * k**n * _I_POWERS[n % 4]
    return LinearOperator.diagonal(symbol)


def wave_solve_spectral(problem: WaveProblem, t: float) -> PeriodicProfile:
    cauchy = CauchyProblem(
        problem.order,
        spectral_symbol(problem),
        [p.spectrum() for p in problem.initial],
        t0=problem.t0,
    )
    modes = solve_closed(cauchy, t).state
    return PeriodicProfile.from_modes(modes)


def _check_zero_mean(profile: PeriodicProfile, j: int) -> None:
    mean_mode = profile.spectrum()[0]
    scale = max(1.0, float(np.abs(profile.samples).max()))
    if abs(mean_mode) > 1e-12 * profile.size * scale:
        raise MeanModeError(
            f"profile u_{j} has nonzero mean; the inverse derivative (i k v)^-{j} "
            "is singular at k = 0"
        )


def shift_terms(problem: WaveProblem, t: float) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield ``(j, n, modes)`` for each of the ``N^2`` propagated terms.

    Term ``(j, n)`` is ``C[n, j] (v d/dx)^-j u_j(x + v tau lam_n)`` in
    Fourier space.
    """
    tau = float(t) - problem.t0
    if tau < 0:
        raise ConfigurationError(f"t={t} precedes t0={problem.t0}")
    n_ = problem.order
    coeffs = default_coeffs(n_)
    lam = _roots(n_)
    k = wavenumbers(problem.grid_size).astype(np.float64)
    ikv = 1j * k * problem.speed
    nonzero = k != 0
    for j, profile in enumerate(problem.initial):
        spectrum = profile.spectrum()
        if j == 0:
            weighted = spectrum
        else:
            _check_zero_mean(profile, j)
            weighted = np.zeros_like(spectrum)
            weighted[nonzero] = spectrum[nonzero] * ikv[nonzero] ** (-j)
        for n in range(1, n_ + 1):
            shift = np.exp(ikv * tau * lam[n - 1])
            yield j, n, coeffs.entries[n - 1, j] * shift * weighted


def wave_solve_shift(problem: WaveProblem, t: float) -> PeriodicProfile:
    modes = np.zeros(problem.grid_size, dtype=np.complex128)
    for _, _, term in shift_terms(problem, t):
        modes += term
    return PeriodicProfile.from_modes(modes)


def dalembert_reference(
    u0: PeriodicProfile, u1: PeriodicProfile, v: float, t: float
) -> PeriodicProfile:
    """Classical solution of ``u_tt = v^2 u_xx`` with profile ``u0`` and rate ``u1``."""
    _check_zero_mean(u1, 1)
    k = wavenumbers(u0.size).astype(np.float64)
    modes = u0.spectrum() * np.cos(k * v * t)
    nonzero = k != 0
    modes[nonzero] += u1.spectrum()[nonzero] * np.sin(k[nonzero] * v * t) / (v * k[nonzero])
    return PeriodicProfile.from_modes(modes)


def wave_energy(problem: WaveProblem, t: float) -> float:
    """``sum_k |v k u_k|^2 + |d_t u_k|^2`` for the second-order problem."""
    if problem.order != 2:
        raise ConfigurationError("wave energy is defined for order 2 only")
    cauchy = CauchyProblem(
        2, spectral_symbol(problem), [p.spectrum() for p in problem.initial], t0=problem.t0
    )
    symbol = cauchy.operator.data
    u = solve_closed(cauchy, t).state
    # d/dt phi_0 = G phi_1 and d/dt phi_1 = phi_0, so u_t solves the same
    # problem with initial data (u_1, G u_0).
    shifted = CauchyProblem(
        2, cauchy.operator, [cauchy.initial[1], symbol * cauchy.initial[0]], t0=problem.t0
    )
    u_t = solve_closed(shifted, t).state
    k = wavenumbers(problem.grid_size)
    return float(np.sum(np.abs(problem.speed * k * u) ** 2 + np.abs(u_t) ** 2))


def make_profile(spec: str, m: int) -> PeriodicProfile:
    """Built-in band-limited profiles: ``sine:k``, ``cosine:k``, ``gaussian-band:kmax``."""
    name, _, arg = spec.partition(":")
    try:
        k = int(arg)
    except ValueError:
        raise ConfigurationError(f"profile {spec!r} needs an integer parameter") from None
    if not 0 <= k < m // 2:
        raise ConfigurationError(f"profile wavenumber {k} outside 0..{m // 2 - 1}")
    modes = np.zeros(m, dtype=np.complex128)
    if name == "sine":
        modes[k] += m / 2j
        modes[-k] -= m / 2j
    elif name == "cosine":
        modes[k] += m / 2
        modes[-k] += m / 2
    elif name == "gaussian-band":
        width = max(k, 1) / 3.0
        for q in range(-k, k + 1):
            modes[q] = m * np.exp(-0.5 * (q / width) ** 2) / (k + 1)
    else:
        raise ConfigurationError(f"unknown profile {name!r}")
    return PeriodicProfile.from_modes(modes)
