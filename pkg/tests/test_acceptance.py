"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are collected in ``RESULTS`` and printed in the terminal summary
(see ``conftest.py``); running this file directly prints them as well.
"""
import json
import math
import time

import numpy as np
import pytest

from spontaneous_entropy.classical import (
    boundary_terms,
    classical_field_entropy,
    classical_spectrum,
    damped_trajectory,
    larmor_power,
)
from spontaneous_entropy.cli import main as cli_main
from spontaneous_entropy.dynamics import (
    asymptotic_amplitudes,
    evolve,
    evolve_oracle,
    recurrence_scan,
    time_reversal_error,
)
from spontaneous_entropy.entropy import (
    diagonal_entropy,
    emission_entropy,
    entropy_timescale,
    shell_entropy_report,
    small_box_average,
)
from spontaneous_entropy.modes import enumerate_1d
from spontaneous_entropy.params import PhysicalParams, tau_classical, v0_3d, v0_classical
from spontaneous_entropy.spectra import (
    SpectralDistribution,
    bin_spectrum,
    fit_exponential,
    fit_lorentzian,
    lorentzian_bin_mass,
    mode_bin_edges,
)

GAMMA = 1e-3
RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_01_exponential_decay():
    t0 = time.perf_counter()
    m = enumerate_1d(PhysicalParams(), 50, gamma_target=GAMMA)
    ev = evolve(m, t_final=5 / GAMMA, n_samples=251, keep_modes=False)
    fit = fit_exponential(ev.times, ev.p_excited, gamma=GAMMA)
    elapsed = time.perf_counter() - t0
    err = abs(fit.rate / GAMMA - 1)
    ok = m.spacing <= GAMMA / 20 * (1 + 1e-12) and err < 0.05 and elapsed < 60
    report(1, ok, f"rate error {err:.4f} (< 0.05), spacing/Gamma {m.spacing / GAMMA:.4f}, {elapsed:.2f} s (< 60)")


def test_criterion_02_lorentzian_line():
    t0 = time.perf_counter()
    m = enumerate_1d(PhysicalParams(), 50, gamma_target=GAMMA)
    spec = bin_spectrum(asymptotic_amplitudes(m), m, 0.1 * GAMMA)
    fit = fit_lorentzian(spec)
    elapsed = time.perf_counter() - t0
    e_w = abs(fit.hwhm / (GAMMA / 2) - 1)
    e_c = abs(fit.center - 1.0)
    ok = e_w < 0.10 and e_c < 1e-3 and elapsed < 10
    report(2, ok, f"hwhm error {e_w:.4f} (< 0.10), center error {e_c:.2e} (< 1e-3), {elapsed:.2f} s (< 10)")


def _entropy_1d(scale):
    p = PhysicalParams()
    m = enumerate_1d(p.with_overrides(box_length=scale * p.box_length), 50)
    return emission_entropy(asymptotic_amplitudes(m), m)


def test_criterion_03_volume_scaling():
    r1 = [_entropy_1d(a) for a in (1, 2, 4)]
    d1 = [b.s_exact - a.s_exact for a, b in zip(r1, r1[1:])]
    off1 = [r.offset("s_paper_1d") for r in r1]
    # 3D shell: Gamma = 0.02 gives a practical lattice up to 4 L0
    p3 = PhysicalParams(dimension=3, dipole_d=math.sqrt(3 * math.pi * 0.02), box_length=2 * math.pi * 35.21)
    r3 = [shell_entropy_report(p3.with_overrides(box_length=a * p3.box_length), 30) for a in (1, 2, 4)]
    d3 = [b.s_exact - a.s_exact for a, b in zip(r3, r3[1:])]
    off3 = [r.offset("s_paper_3d") for r in r3]
    ok = (
        all(abs(d - math.log(2)) <= 0.02 for d in d1)
        and all(abs(d - 3 * math.log(2)) <= 0.05 for d in d3)
        and np.ptp(off1) <= 0.02
        and np.ptp(off3) <= 0.02
    )
    report(
        3, ok,
        "1D steps - ln2 " + ", ".join(f"{d - math.log(2):+.4f}" for d in d1)
        + "; 3D steps - 3ln2 " + ", ".join(f"{d - 3 * math.log(2):+.4f}" for d in d3)
        + f"; offset spread 1D {np.ptp(off1):.4f}, 3D {np.ptp(off3):.4f} (<= 0.02)",
    )


def test_criterion_04_small_cavity():
    tau_em = 1 / GAMMA
    p = PhysicalParams(box_length=tau_em)
    s = entropy_timescale(p, tau_em)
    m = enumerate_1d(p, 50, min_modes_per_hwhm=0)
    avg = small_box_average(m, t_final=200 / GAMMA)
    ok = s == math.log(2) and abs(avg.mean_p_excited - 0.5) <= 0.1
    report(4, ok, f"timescale entropy - ln2 = {s - math.log(2):.1e}; mean P_e {avg.mean_p_excited:.4f} (0.5 +- 0.1)")


def test_criterion_05_recurrence():
    L = 5 / GAMMA
    small = enumerate_1d(PhysicalParams(box_length=L), 100, min_modes_per_hwhm=0)
    revivals = recurrence_scan(small, t_final=10 / GAMMA)
    first = revivals[0].onset if revivals else math.nan
    large = enumerate_1d(PhysicalParams(), 50)
    late = recurrence_scan(large, t_final=10 / GAMMA)
    ok = abs(first / L - 1) <= 0.10 and late == []
    report(5, ok, f"first revival at {first / L:.4f} L/c (+- 0.10); large box revivals before 10/Gamma: {len(late)}")


def test_criterion_06_oracle_equivalence(modes_500):
    ts = np.linspace(0, 3 / GAMMA, 61)
    exact = evolve_oracle(modes_500, times=ts)
    ode = evolve(modes_500, sample_times=ts)
    dev = max(np.max(np.abs(ode.c0 - exact.c0)), np.max(np.abs(ode.modes - exact.modes)))
    rev = time_reversal_error(modes_500, t=3 / GAMMA)
    ok = dev <= 1e-6 and rev <= 1e-6
    report(6, ok, f"max amplitude deviation {dev:.2e} (<= 1e-6), time-reversal error {rev:.2e} (<= 1e-6)")


def test_criterion_07_unitarity(modes_1d, modes_500):
    ev = evolve(modes_1d, t_final=5 / GAMMA, n_samples=101, keep_modes=False)
    ex = evolve_oracle(modes_500, times=np.linspace(0, 3 / GAMMA, 61))
    d_ode = float(np.max(np.abs(ev.norms - 1)))
    d_ex = float(np.max(np.abs(ex.norms - 1)))
    ok = d_ode <= 1e-6 and d_ex <= 1e-12
    report(7, ok, f"integrator norm drift {d_ode:.2e} (<= 1e-6), oracle {d_ex:.2e} (<= 1e-12)")


def test_criterion_08_classical_energy_balance():
    p = PhysicalParams(charge_e=math.sqrt(6 * math.pi * 1e-4))  # omega0 tau = 1e4
    tau = tau_classical(p)
    tr = damped_trajectory(p, 1.0, 20 * tau, 2 * math.pi / 200)
    pw = larmor_power(p, tr)
    balance = abs(pw.radiated[-1] / pw.mechanical_loss[-1] - 1)
    ratios = [boundary_terms(p, tr, t).ratio for t in (0.0, 0.37 * tau, 5 * tau)]
    p100 = PhysicalParams(charge_e=math.sqrt(6 * math.pi * 1e-2))  # omega0 tau = 100
    tr100 = damped_trajectory(p100, 1.0, 10 * tau_classical(p100), 2 * math.pi / 200)
    ratios += [boundary_terms(p100, tr100, t).ratio for t in (0.0, 50.0, 333.3)]
    ok = balance < 0.01 and max(ratios) < 0.01
    report(8, ok, f"energy balance error {balance:.2e} (< 0.01), max boundary/retained {max(ratios):.2e} (< 0.01)")


def test_criterion_09_correspondence():
    p = PhysicalParams()
    tau = tau_classical(p)
    m = enumerate_1d(p, 50, gamma_target=1 / tau)
    tr = damped_trajectory(p, 1.0, 30 * tau, 2 * math.pi / 20)
    spec = classical_spectrum(tr, edges=mode_bin_edges(m, 2 * m.spacing))
    s_cl = classical_field_entropy(spec, p, m).s_exact
    s_q = emission_entropy(asymptotic_amplitudes(m), m).s_exact
    v_err = abs(v0_classical(p) / v0_3d(p, 1 / (2 * tau)) - 1)
    ok = abs(s_cl - s_q) <= 0.05 and v_err <= 1e-12
    report(9, ok, f"classical - quantum entropy {s_cl - s_q:+.5f} (<= 0.05), V0 identity error {v_err:.1e} (<= 1e-12)")


def test_criterion_10_properties(tmp_path):
    rng = np.random.default_rng(10)
    failures = []
    for _ in range(200):
        a = rng.random(rng.integers(1, 40))
        b = rng.random(rng.integers(1, 40))
        a /= a.sum()
        b /= b.sum()
        s_a = diagonal_entropy(a)
        if s_a < 0:
            failures.append("nonnegativity")
        if abs(diagonal_entropy(np.outer(a, b).ravel()) - s_a - diagonal_entropy(b)) > 1e-12:
            failures.append("additivity")
        if abs(diagonal_entropy(rng.permutation(a)) - s_a) > 1e-12:
            failures.append("permutation")
    if diagonal_entropy(np.array([0.0, 1.0, 0.0])) != 0.0:
        failures.append("0 ln 0")
    t = np.linspace(0, 5000, 300)
    fit = fit_exponential(t, 0.7 * np.exp(-GAMMA * t))
    if abs(fit.rate / GAMMA - 1) > 1e-10 or abs(fit.amplitude / 0.7 - 1) > 1e-10:
        failures.append("exponential fit recovery")
    edges = np.linspace(1 - 0.05, 1 + 0.05, 501)
    mass = lorentzian_bin_mass(edges, 0.95, 1.0, 5e-4)
    lf = fit_lorentzian(SpectralDistribution(edges, mass, mass.sum()))
    if abs(lf.hwhm / 5e-4 - 1) > 1e-10 or abs(lf.center - 1) > 1e-10 or abs(lf.amplitude / 0.95 - 1) > 1e-10:
        failures.append("Lorentzian fit recovery")
    outs = []
    for name in ("a", "b"):
        if cli_main(["spectrum", "--quiet", "--out", str(tmp_path / name)]) != 0:
            failures.append("cli run")
        outs.append([(tmp_path / name / f).read_bytes() for f in ("spectrum.csv", "modes.csv", "lorentz_fit.json")])
    if outs[0] != outs[1]:
        failures.append("byte-identical rerun")
    report(10, not failures, "entropy, fit and rerun properties hold" if not failures else "failed: " + ", ".join(sorted(set(failures))))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
