"""Randomised invariants of the entropy, binning and fitting helpers."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import BACKENDS
from spontaneous_entropy.entropy import diagonal_entropy
from spontaneous_entropy.spectra import (
    SpectralDistribution,
    bin_masses,
    fit_exponential,
    fit_lorentzian,
    lorentzian_bin_mass,
)

weights = arrays(np.float64, st.integers(1, 60), elements=st.floats(0.0, 1.0))


def _normalise(w):
    total = w.sum()
    return w / total if total > 0 else None


@settings(max_examples=200, deadline=None)
@given(weights, st.sampled_from(BACKENDS))
def test_entropy_is_nonnegative_and_bounded(w, backend):
    p = _normalise(w)
    if p is None:
        return
    s = diagonal_entropy(p, backend=backend)
    assert s >= 0.0
    assert s <= math.log(p.size) + 1e-12


@settings(max_examples=200, deadline=None)
@given(weights, weights)
def test_entropy_additive_for_product_distributions(wa, wb):
    pa, pb = _normalise(wa), _normalise(wb)
    if pa is None or pb is None:
        return
    joint = np.outer(pa, pb).ravel()
    assert diagonal_entropy(joint) == pytest.approx(
        diagonal_entropy(pa) + diagonal_entropy(pb), abs=1e-12
    )


@settings(max_examples=100, deadline=None)
@given(weights, st.randoms(use_true_random=False))
def test_entropy_permutation_invariant(w, rnd):
    p = _normalise(w)
    if p is None:
        return
    perm = list(range(p.size))
    rnd.shuffle(perm)
    assert diagonal_entropy(p[perm]) == pytest.approx(diagonal_entropy(p), abs=1e-13)


@given(st.integers(0, 50))
def test_zero_entries_contribute_nothing(n_zero):
    p = np.array([0.25, 0.75])
    padded = np.concatenate([p, np.zeros(n_zero)])
    assert diagonal_entropy(padded) == diagonal_entropy(p)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-4, 1.0), st.floats(0.1, 10.0))
def test_exponential_fit_recovers_clean_decay(rate, amplitude):
    t = np.linspace(0.0, 5.0 / rate, 200)
    fit = fit_exponential(t, amplitude * np.exp(-rate * t))
    assert fit.rate == pytest.approx(rate, rel=1e-10)
    assert fit.amplitude == pytest.approx(amplitude, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(
    arrays(np.float64, st.integers(1, 300), elements=st.floats(0.0, 0.999)),
    arrays(np.float64, 300, elements=st.floats(0.0, 1.0)),
)
def test_binning_conserves_mass(omega, prob):
    prob = prob[: omega.size]
    edges = np.linspace(0.0, 1.0, 17)
    spec = bin_masses(omega, prob, edges)
    assert spec.mass.sum() == pytest.approx(prob.sum(), rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(-2.0, 2.0))
def test_lorentz_fit_scale_equivariant(scale, shift):
    edges = np.linspace(-20.0, 20.0, 401)
    mass = lorentzian_bin_mass(edges, 0.9, 0.3, 1.2)
    base = fit_lorentzian(SpectralDistribution(edges, mass, mass.sum()))
    moved = fit_lorentzian(SpectralDistribution(edges * scale + shift, mass, mass.sum()))
    assert moved.hwhm == pytest.approx(base.hwhm * scale, rel=1e-8)
    assert moved.center == pytest.approx(base.center * scale + shift, rel=1e-8, abs=1e-8)
    assert moved.amplitude == pytest.approx(base.amplitude, rel=1e-8)
