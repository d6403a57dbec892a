import math

import numpy as np
import pytest

from spontaneous_entropy.dynamics import asymptotic_amplitudes
from spontaneous_entropy.modes import (
    MemoryCapError,
    ModeSet,
    ResolutionError,
    collective_modes,
    density_of_states,
    empirical_density,
    enumerate_1d,
    enumerate_3d,
    lattice_shell_count,
    shell_count_estimate,
    shell_entropy_3d,
)
from spontaneous_entropy.params import PhysicalParams, gamma_ww

P3 = PhysicalParams(dimension=3, dipole_d=math.sqrt(3 * math.pi * 0.02), box_length=2 * math.pi * 20)


def test_1d_count_and_spacing(default_params):
    m = enumerate_1d(default_params, 20)
    # window 40 Gamma at spacing Gamma/20: 800 frequencies, each for +k and -k
    assert m.size == 1600
    assert m.spacing == pytest.approx(2 * math.pi / default_params.box_length, rel=0)
    distinct = np.unique(m.omega)
    assert np.allclose(np.diff(distinct), m.spacing, rtol=1e-9, atol=0)


def test_1d_sorted_and_inside_window(modes_1d):
    lo, hi = modes_1d.window
    assert np.all(np.diff(modes_1d.omega) >= 0)
    assert modes_1d.omega.min() >= lo and modes_1d.omega.max() <= hi
    assert np.all(modes_1d.coupling >= 0)


def test_1d_golden_rule_calibration(modes_1d, default_params):
    lam2 = modes_1d.coupling[0] ** 2
    rho = density_of_states(modes_1d, 1.0)
    assert rho == pytest.approx(default_params.box_length / math.pi)
    assert 2 * math.pi * lam2 * rho == pytest.approx(1e-3, rel=1e-12)


def test_1d_gamma_target_overrides_dipole():
    p = PhysicalParams(dipole_d=0.0)
    m = enumerate_1d(p, 10, gamma_target=1e-3)
    assert m.gamma == 1e-3
    assert np.all(m.coupling > 0)


def test_1d_resolution_error_names_length():
    p = PhysicalParams(box_length=1000.0)
    with pytest.raises(ResolutionError, match="box_length >="):
        enumerate_1d(p, 50)


def test_1d_density_matches_histogram(modes_1d):
    centers, rho = empirical_density(modes_1d, 1e-2)
    interior = slice(1, -1)
    # one mode more or less per bin from edge placement is a 0.25% effect
    assert np.allclose(rho[interior], density_of_states(modes_1d, centers[interior]), rtol=0.005)


def test_density_outside_window_is_error(modes_1d):
    with pytest.raises(ValueError):
        density_of_states(modes_1d, 2.0)


def test_mode_records(modes_1d):
    first = next(iter(modes_1d))
    assert first.weight == 1 and first.direction is None
    assert len(modes_1d.entries) == modes_1d.size


def test_arrays_are_read_only(modes_1d):
    with pytest.raises(ValueError):
        modes_1d.omega[0] = 0.0


def test_3d_polarisation_sum_rule():
    m = enumerate_3d(P3, 20)
    lam2 = m.coupling**2
    pair = lam2[0::2] + lam2[1::2]
    p = m.params
    sin2 = 1.0 - m.directions[0::2, 2] ** 2
    expected = p.dipole_d**2 * m.omega[0::2] / (2 * p.volume) * sin2
    assert np.allclose(pair, expected, rtol=1e-12, atol=1e-300)


def test_3d_frequency_is_c_k():
    m = enumerate_3d(P3, 20)
    dk = 2 * math.pi / P3.box_length
    assert np.allclose(m.omega, np.sqrt(m.lattice_n2 * dk * dk), rtol=1e-14)
    assert np.all(np.diff(m.omega) >= 0)


def test_3d_count_matches_lattice_and_estimate():
    m = enumerate_3d(P3, 20)
    assert m.size == 2 * lattice_shell_count(P3, 20)
    lo, hi = m.window
    exact_volume = 2 * (4 * math.pi / 3) * (hi**3 - lo**3) * (P3.box_length / (2 * math.pi)) ** 3
    assert m.size == pytest.approx(exact_volume, rel=0.01)
    # thin-shell estimate misses the <omega^2> = 1 + (W Gamma)^2 / 3 curvature
    curvature = 1 + (20 * gamma_ww(P3)) ** 2 / 3
    assert m.size == pytest.approx(shell_count_estimate(P3, 20) * curvature, rel=0.01)


def test_3d_density_of_states_matches_lattice():
    p = P3.with_overrides(box_length=2 * math.pi * 40)
    m = enumerate_3d(p, 20)
    centers, rho = empirical_density(m, 0.1)
    assert np.allclose(rho, density_of_states(m, centers), rtol=0.02)


def test_3d_memory_cap():
    with pytest.raises(MemoryCapError):
        enumerate_3d(P3, 20, max_modes=1000)


def test_3d_enumeration_is_deterministic():
    a = enumerate_3d(P3, 20)
    b = enumerate_3d(P3, 20)
    assert np.array_equal(a.omega, b.omega) and np.array_equal(a.coupling, b.coupling)


def test_3d_coupling_sum_reproduces_golden_rule():
    p = P3.with_overrides(box_length=2 * math.pi * 40)
    m = enumerate_3d(p, 20)
    lo, hi = m.window
    # 2 pi <lam^2 rho> at omega0 from a band around resonance
    band = np.abs(m.omega - 1.0) < 0.1 * (hi - lo)
    width = np.ptp(m.omega[band])
    rate = 2 * math.pi * np.sum(m.coupling[band] ** 2) / width
    assert rate == pytest.approx(gamma_ww(p), rel=0.03)


def test_shell_stream_equals_materialised():
    m = enumerate_3d(P3, 20)
    a = asymptotic_amplitudes(m)
    probs = a.mode_probabilities
    nz = probs[probs > 0]
    s_ref = float(-np.sum(nz * np.log(nz)))
    shell = shell_entropy_3d(P3, 20)
    assert shell.n_modes == m.size
    assert shell.entropy == pytest.approx(s_ref, rel=1e-11)
    assert shell.mass == pytest.approx(float(probs.sum()), rel=1e-11)


def test_collective_modes_exact_merge(modes_1d):
    c = collective_modes(modes_1d)
    assert c.size == modes_1d.size // 2
    assert np.allclose(c.coupling**2, 2 * modes_1d.coupling[0] ** 2)
    assert np.all(c.weight == 2)


def test_collective_3d_preserves_coupling_sum():
    m = enumerate_3d(P3, 20)
    c = collective_modes(m)
    assert c.reduced and c.size < m.size
    assert np.sum(c.coupling**2) == pytest.approx(np.sum(m.coupling**2), rel=1e-12)


def test_summary_is_json_ready(modes_1d):
    import json

    s = modes_1d.summary()
    json.dumps(s)
    assert s["n_modes"] == modes_1d.size


def test_modeset_rejects_negative_coupling(default_params):
    with pytest.raises(ValueError):
        ModeSet(1, default_params, 1e-3, (0.9, 1.1), np.array([1.0]), np.array([-1.0]),
                np.array([1]), np.array([0.0]), 0.1)
