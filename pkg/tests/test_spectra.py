import math

import numpy as np
import pytest

from spontaneous_entropy.dynamics import asymptotic_amplitudes, evolve, evolve_oracle, initial_state, AmplitudeState
from spontaneous_entropy.modes import ResolutionError
from spontaneous_entropy.spectra import (
    FitError,
    SpectralDistribution,
    bin_spectrum,
    fit_exponential,
    fit_lorentzian,
    lorentzian_bin_mass,
)

GAMMA = 1e-3


def test_asymptotic_profile_is_lorentzian(modes_1d):
    spec = bin_spectrum(asymptotic_amplitudes(modes_1d), modes_1d, GAMMA / 10)
    c = spec.centers
    g = GAMMA / 2
    expected = (1 / math.pi) * g / ((c - 1.0) ** 2 + g * g) * (GAMMA / 10)
    near = np.abs(c - 1.0) <= 2 * GAMMA
    assert np.max(np.abs(spec.mass[near] / expected[near] - 1)) < 0.05


def test_initial_state_has_no_photon(modes_1d):
    spec = bin_spectrum(initial_state(modes_1d), modes_1d, GAMMA / 10)
    assert spec.total_mass == 0.0


def test_single_mode_state(modes_1d):
    c = np.zeros(modes_1d.size, dtype=complex)
    c[1234] = 1.0
    spec = bin_spectrum(AmplitudeState(0.0, 0.0, c), modes_1d, GAMMA / 10)
    assert np.count_nonzero(spec.mass) == 1
    assert spec.mass.max() == 1.0


def test_mass_conservation(modes_1d):
    ev = evolve(modes_1d, sample_times=[1500.0])
    s = ev.final
    spec = bin_spectrum(s, modes_1d, GAMMA / 5)
    assert spec.total_mass == pytest.approx(1 - s.p_excited, abs=1e-9)
    assert math.fsum(spec.mass.tolist()) == pytest.approx(spec.total_mass, abs=1e-12)


def test_bin_under_resolution(modes_1d):
    with pytest.raises(ResolutionError, match="at least"):
        bin_spectrum(asymptotic_amplitudes(modes_1d), modes_1d, modes_1d.spacing)


def test_distribution_validation():
    with pytest.raises(ValueError):
        SpectralDistribution(np.array([0.0, 1.0, 0.5]), np.array([0.1, 0.1]), 0.2)
    with pytest.raises(ValueError):
        SpectralDistribution(np.array([0.0, 1.0]), np.array([-0.1]), -0.1)


def test_exponential_exact_recovery():
    t = np.linspace(0, 5000, 200)
    fit = fit_exponential(t, np.exp(-1e-3 * t), gamma=1e-3)
    assert fit.rate == pytest.approx(1e-3, abs=1e-10 * 1e-3)
    assert fit.fit_window == (1000.0, 4000.0)
    assert fit.residual < 1e-12


def test_exponential_constant_series():
    t = np.linspace(0, 10, 50)
    assert abs(fit_exponential(t, np.ones_like(t)).rate) <= 1e-12


def test_exponential_simulation_golden_rule(modes_1d):
    ev = evolve(modes_1d, t_final=5 / GAMMA, n_samples=501, keep_modes=False)
    fit = fit_exponential(ev.times, ev.p_excited, gamma=modes_1d.gamma)
    assert fit.rate == pytest.approx(GAMMA, rel=0.05)


def test_exponential_needs_samples():
    with pytest.raises(FitError, match="need 10"):
        fit_exponential(np.arange(5.0), np.ones(5))


def test_exponential_rejects_nonpositive():
    t = np.linspace(0, 1, 20)
    y = np.ones(20)
    y[15] = 0.0
    with pytest.raises(FitError, match="trim"):
        fit_exponential(t, y)


def test_exponential_ode_vs_oracle(modes_500):
    ts = np.linspace(0, 4 / GAMMA, 201)
    a = fit_exponential(ts, evolve(modes_500, sample_times=ts, keep_modes=False).p_excited, gamma=GAMMA)
    b = fit_exponential(ts, evolve_oracle(modes_500, times=ts, keep_modes=False).p_excited, gamma=GAMMA)
    assert a.rate == pytest.approx(b.rate, rel=0.01)


def _synthetic(amplitude=1.0, center=1.0, hwhm=5e-4):
    edges = np.linspace(center - 40 * hwhm, center + 40 * hwhm, 801)
    mass = lorentzian_bin_mass(edges, amplitude, center, hwhm)
    return SpectralDistribution(edges, mass, float(mass.sum()))


def test_lorentzian_exact_recovery():
    fit = fit_lorentzian(_synthetic())
    assert fit.center == pytest.approx(1.0, rel=1e-3)
    assert fit.hwhm == pytest.approx(5e-4, rel=1e-3)
    # exact inputs are recovered far beyond the 0.1% requirement
    assert fit.hwhm == pytest.approx(5e-4, rel=1e-10)
    assert fit.center == pytest.approx(1.0, abs=1e-12)


def test_lorentzian_scale_equivariance():
    a = fit_lorentzian(_synthetic(1.0))
    b = fit_lorentzian(_synthetic(37.0))
    assert b.center == pytest.approx(a.center, rel=1e-12)
    assert b.hwhm == pytest.approx(a.hwhm, rel=1e-9)
    assert b.amplitude == pytest.approx(37 * a.amplitude, rel=1e-9)


def test_lorentzian_on_asymptotic_spectrum(modes_1d):
    spec = bin_spectrum(asymptotic_amplitudes(modes_1d), modes_1d, GAMMA / 10)
    fit = fit_lorentzian(spec)
    assert fit.hwhm == pytest.approx(GAMMA / 2, rel=0.10)
    assert fit.center == pytest.approx(1.0, rel=1e-3)


def test_lorentzian_needs_bins():
    edges = np.linspace(0, 1, 6)
    with pytest.raises(FitError, match="10 bins"):
        fit_lorentzian(SpectralDistribution(edges, np.full(5, 0.2), 1.0))


def test_lorentzian_non_convergence_reports_residual():
    with pytest.raises(FitError, match="residual"):
        fit_lorentzian(_synthetic(), max_iter=1)


def test_fit_records_serialise():
    import json

    fit = fit_lorentzian(_synthetic())
    json.dumps(fit.to_dict())
    t = np.linspace(0, 10, 20)
    json.dumps(fit_exponential(t, np.exp(-t)).to_dict())
