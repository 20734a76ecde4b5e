import math

import numpy as np
import pytest

from cauchyprop.errors import ConfigurationError, MeanModeError
from cauchyprop.wave import (
    PeriodicProfile,
    WaveProblem,
    dalembert_reference,
    grid,
    make_profile,
    shift_terms,
    spectral_symbol,
    wave_energy,
    wave_solve_shift,
    wave_solve_spectral,
    wavenumbers,
)
from helpers import band_limited, rel_max

M = 64
X = grid(M)


def profile(values):
    return PeriodicProfile(np.asarray(values, dtype=complex))


def zero():
    return profile(np.zeros(M))


class TestSymbol:
    def test_wavenumber_order(self):
        assert wavenumbers(8).tolist() == [0, 1, 2, 3, 4, -3, -2, -1]

    def test_values(self):
        symbol = spectral_symbol(WaveProblem(2, 1.0, 8, [zero8(), zero8()])).data
        assert symbol[1] == -1
        symbol = spectral_symbol(WaveProblem(2, 2.0, 8, [zero8(), zero8()])).data
        assert symbol[3] == -36

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
    def test_zero_mode(self, order):
        problem = WaveProblem(order, 1.7, 8, [zero8()] * order)
        assert spectral_symbol(problem).data[0] == 0


def zero8():
    return profile(np.zeros(8))


class TestProblem:
    def test_grid_power_of_two(self):
        with pytest.raises(ConfigurationError):
            WaveProblem(1, 1.0, 12, [profile(np.zeros(12))])

    def test_profile_count(self):
        with pytest.raises(ConfigurationError):
            WaveProblem(2, 1.0, M, [zero()])

    def test_inconsistent_modes(self):
        with pytest.raises(ConfigurationError):
            PeriodicProfile(np.sin(X), np.zeros(M))


class TestSpectral:
    def test_half_period_flips_sine(self):
        problem = WaveProblem(2, 1.0, M, [profile(np.sin(X)), zero()])
        u = wave_solve_spectral(problem, math.pi).samples
        assert np.abs(u + np.sin(X)).max() < 1e-12

    def test_initial_time(self, rng):
        u0 = band_limited(rng)
        problem = WaveProblem(3, 1.0, M, [u0, zero(), zero()], t0=0.3)
        np.testing.assert_array_equal(wave_solve_spectral(problem, 0.3).modes, u0.modes)

    def test_velocity_data(self):
        problem = WaveProblem(2, 1.0, M, [zero(), profile(np.sin(X))])
        u = wave_solve_spectral(problem, math.pi / 2).samples
        assert np.abs(u - np.sin(X)).max() < 1e-12


class TestShift:
    def test_second_order_standing_wave(self):
        for tau in (0.4, 2.0):
            problem = WaveProblem(2, 1.0, M, [profile(np.sin(X)), zero()])
            u = wave_solve_shift(problem, tau).samples
            expected = 0.5 * np.sin(X + tau) + 0.5 * np.sin(X - tau)
            assert np.abs(u - expected).max() < 1e-12
            assert np.abs(u - wave_solve_spectral(problem, tau).samples).max() < 1e-10

    def test_first_order_translation(self, rng):
        u0 = band_limited(rng, kmax=5)
        problem = WaveProblem(1, 1.0, M, [u0])
        tau = 2 * math.pi * 5 / M  # five grid cells
        u = wave_solve_shift(problem, tau).samples
        assert np.abs(u - np.roll(u0.samples, -5)).max() < 1e-12

    def test_fourth_order_cosine(self):
        # exact modes: complex shifts amplify round-off in high modes by exp(k tau)
        problem = WaveProblem(4, 1.0, M, [make_profile("cosine:1", M), zero(), zero(), zero()])
        tau = 1.3
        lam = [1j, -1, -1j, 1]
        expected = sum(0.25 * np.cos(X + tau * l) for l in lam)
        u = wave_solve_shift(problem, tau).samples
        assert np.abs(u - expected).max() < 1e-12
        assert rel_max(u, wave_solve_spectral(problem, tau).samples) < 1e-9

    def test_nonzero_mean_rejected(self):
        problem = WaveProblem(2, 1.0, M, [zero(), profile(1 + np.sin(X))])
        with pytest.raises(MeanModeError):
            wave_solve_shift(problem, 1.0)

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_term_count(self, rng, order):
        profiles = [band_limited(rng, zero_mean=j > 0) for j in range(order)]
        terms = list(shift_terms(WaveProblem(order, 1.0, M, profiles), 0.7))
        assert len(terms) == order**2
        assert {(j, n) for j, n, _ in terms} == {
            (j, n) for j in range(order) for n in range(1, order + 1)
        }


class TestDalembert:
    def test_identity_at_zero(self, rng):
        u0 = band_limited(rng)
        u = dalembert_reference(u0, zero(), 1.0, 0.0)
        assert np.abs(u.samples - u0.samples).max() < 1e-14

    def test_quarter_period(self):
        u = dalembert_reference(profile(np.sin(X)), zero(), 1.0, math.pi / 2)
        assert np.abs(u.samples).max() < 1e-15

    def test_velocity_half_period(self):
        u = dalembert_reference(zero(), profile(np.cos(X)), 1.0, math.pi)
        assert np.abs(u.samples).max() < 1e-15

    def test_nonzero_mean(self):
        with pytest.raises(MeanModeError):
            dalembert_reference(zero(), profile(np.ones(M)), 1.0, 1.0)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
@pytest.mark.parametrize("tau", [0.1, 1.0, math.pi])
def test_route_agreement(rng, order, tau):
    profiles = [band_limited(rng, zero_mean=j > 0) for j in range(order)]
    problem = WaveProblem(order, 1.0, M, profiles, t0=-0.25)
    spectral = wave_solve_spectral(problem, tau - 0.25).samples
    shift = wave_solve_shift(problem, tau - 0.25).samples
    assert rel_max(shift, spectral) < 1e-9
    if order == 2:
        ref = dalembert_reference(profiles[0], profiles[1], 1.0, tau).samples
        assert np.abs(spectral - ref).max() < 1e-9
        assert np.abs(shift - ref).max() < 1e-9


def test_speed_scaling(rng):
    profiles = [band_limited(rng), band_limited(rng, zero_mean=True)]
    problem = WaveProblem(2, 2.5, M, profiles)
    ref = dalembert_reference(profiles[0], profiles[1], 2.5, 0.9).samples
    assert np.abs(wave_solve_spectral(problem, 0.9).samples - ref).max() < 1e-9
    assert np.abs(wave_solve_shift(problem, 0.9).samples - ref).max() < 1e-9


def test_energy_conservation(rng):
    problem = WaveProblem(2, 1.3, M, [band_limited(rng), band_limited(rng, zero_mean=True)])
    energies = [wave_energy(problem, t) for t in (0.0, 0.5, 1.0, math.pi, 7.0)]
    assert max(abs(e - energies[0]) for e in energies) < 1e-8 * energies[0]


class TestProfiles:
    def test_sine(self):
        assert np.abs(make_profile("sine:3", M).samples - np.sin(3 * X)).max() < 1e-14

    def test_cosine(self):
        assert np.abs(make_profile("cosine:2", M).samples - np.cos(2 * X)).max() < 1e-14

    def test_gaussian_band_is_band_limited(self):
        modes = make_profile("gaussian-band:6", M).modes
        k = wavenumbers(M)
        assert np.all(modes[np.abs(k) > 6] == 0)
        assert np.abs(make_profile("gaussian-band:6", M).samples.imag).max() < 1e-14

    @pytest.mark.parametrize("spec", ["square:2", "sine:x", "sine:40"])
    def test_bad_specs(self, spec):
        with pytest.raises(ConfigurationError):
            make_profile(spec, M)
