"""Classical analogue: a radiating, radiation-damped dipole.

The electron follows ``r(t) = r0 exp(-t/(2 tau) + i omega0 t)`` and the
physical displacement is ``Re r``. With a real displacement every cycle
average carries an explicit factor 1/2 (``<cos^2> = 1/2``), noted at each
formula below. The trajectory is sampled analytically; all derivatives are
finite differences on those samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import EntropyReport, build_report
from .modes import ModeSet, ResolutionError
from .params import PhysicalParams, tau_classical, v0_classical
from .spectra import CLASSICAL, SpectralDistribution, bin_masses

__all__ = [
    "ClassicalTrajectory",
    "PowerSeries",
    "ForceSeries",
    "BoundaryTerms",
    "FourierEnergy",
    "damped_trajectory",
    "damping_time",
    "larmor_power",
    "radiative_force",
    "boundary_terms",
    "fourier_energy",
    "classical_spectrum",
    "classical_field_entropy",
]

SAMPLES_PER_PERIOD = 20
MIN_COVERAGE = 10.0


def damping_time(p: PhysicalParams) -> float:
    """``tau_classical`` with an uncharged oscillator mapped to tau = inf."""
    if p.charge_e == 0:
        return math.inf
    return tau_classical(p)


@dataclass(frozen=True, eq=False)
class ClassicalTrajectory:
    times: np.ndarray
    r: np.ndarray
    r0: float
    omega0: float
    tau: float
    dt: float

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.times.tolist(), self.r.tolist()))

    @property
    def displacement(self) -> np.ndarray:
        return self.r.real

    @property
    def envelope(self) -> np.ndarray:
        if math.isinf(self.tau):
            return np.full_like(self.times, abs(self.r0))
        return abs(self.r0) * np.exp(-self.times / (2.0 * self.tau))

    def rows(self):
        for t, z in zip(self.times, self.r):
            yield float(t), float(z.real), float(z.imag)


def damped_trajectory(
    p: PhysicalParams,
    r0: float,
    t_final: float,
    dt: float,
    *,
    tau: float | None = None,
    t_start: float = 0.0,
    min_coverage: float = MIN_COVERAGE,
) -> ClassicalTrajectory:
    """Analytic samples of the damped dipole on ``t_start + k dt``.

    Args:
        p: parameters; tau defaults to the radiation-reaction time of ``p``.
        r0: initial amplitude.
        t_final: span of the samples (must cover ``min_coverage`` tau).
        dt: sample spacing, at most ``2 pi / (20 omega0)``.
        tau: override for the damping time (``math.inf`` for no damping).
        t_start: time of the first sample.

    Raises:
        ResolutionError: dt too coarse or span too short.
    """
    tau = damping_time(p) if tau is None else float(tau)
    max_dt = 2.0 * math.pi / (SAMPLES_PER_PERIOD * p.omega0)
    if not 0 < dt <= max_dt * (1.0 + 1e-12):
        raise ResolutionError(f"dt = {dt:g} under-samples the oscillation; use dt <= {max_dt:.6g}")
    if math.isfinite(tau) and t_final < min_coverage * tau * (1.0 - 1e-12):
        raise ResolutionError(
            f"t_final = {t_final:g} covers less than {min_coverage:g} tau = {min_coverage * tau:g}"
        )
    n = int(round(t_final / dt)) + 1
    t = t_start + dt * np.arange(n, dtype=np.float64)
    decay = 0.0 if math.isinf(tau) else 1.0 / (2.0 * tau)
    r = r0 * np.exp((-decay + 1j * p.omega0) * t)
    return ClassicalTrajectory(t, r, float(r0), p.omega0, tau, float(dt))


def _require_samples(traj: ClassicalTrajectory, n: int = 5) -> None:
    if traj.times.size < n:
        raise ValueError(f"need at least {n} samples, got {traj.times.size}")


def _derivatives(x: np.ndarray, dt: float):
    """Centered first and second differences on the interior points."""
    v = (x[2:] - x[:-2]) / (2.0 * dt)
    a = (x[2:] - 2.0 * x[1:-1] + x[:-2]) / (dt * dt)
    return v, a


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Radiated power, mechanical energy and cumulative radiated energy.

    Values live on the interior sample times (first and last sample dropped).
    """

    times: np.ndarray
    p_ray: np.ndarray
    e_mech: np.ndarray
    radiated: np.ndarray

    @property
    def mechanical_loss(self) -> np.ndarray:
        return self.e_mech[0] - self.e_mech

    def rows(self):
        for t, pw, e in zip(self.times, self.p_ray, self.e_mech):
            yield float(t), float(pw), float(e)


def larmor_power(p: PhysicalParams, traj: ClassicalTrajectory) -> PowerSeries:
    """Larmor power ``ddot(d)^2 / (6 pi eps0 c^3)`` with ``d = e Re r``.

    For an undamped real oscillation the cycle average is
    ``e^2 omega0^4 r0^2 / (12 pi eps0 c^3)``: the ``1/2`` comes from
    ``<cos^2>``. The mechanical energy ``m (v^2 + omega0^2 x^2) / 2`` uses the
    same real displacement, so the two sides of the energy balance share the
    convention.
    """
    _require_samples(traj)
    x = traj.displacement
    v, a = _derivatives(x, traj.dt)
    d_ddot = p.charge_e * a
    power = d_ddot**2 / (6.0 * math.pi * p.eps0 * p.c**3)
    e_mech = 0.5 * p.mass_m * (v**2 + p.omega0**2 * x[1:-1] ** 2)
    radiated = np.concatenate([[0.0], np.cumsum(0.5 * (power[1:] + power[:-1]) * traj.dt)])
    return PowerSeries(traj.times[1:-1], power, e_mech, radiated)


@dataclass(frozen=True, eq=False)
class ForceSeries:
    """Radiation-reaction force in jerk form and in viscous form, on points 2..n-3."""

    times: np.ndarray
    f_jerk: np.ndarray
    f_visc: np.ndarray
    velocity: np.ndarray

    def cycle_average_work(self, omega0: float) -> tuple[float, float]:
        """``<F v>`` for both forms over the largest whole number of periods."""
        if self.times.size < 2:
            raise ValueError("need at least two force samples")
        dt = float(self.times[1] - self.times[0])
        period = 2.0 * math.pi / omega0
        whole = math.floor((self.times[-1] - self.times[0]) / period + 1e-9)
        n = int(round(whole * period / dt)) if whole else self.times.size
        jv = self.f_jerk[:n] * self.velocity[:n]
        vv = self.f_visc[:n] * self.velocity[:n]
        return float(np.mean(jv)), float(np.mean(vv))


def radiative_force(
    p: PhysicalParams, traj: ClassicalTrajectory, tau: float | None = None
) -> ForceSeries:
    """Self-force ``e^2 dddot(x) / (6 pi eps0 c^3)`` next to ``-m v / tau``.

    The jerk uses the five-point centered stencil. ``tau`` defaults to the
    radiation-reaction time of ``p`` (not the trajectory's damping, so an
    undamped test trajectory can still be compared against the viscous form).
    """
    _require_samples(traj)
    tau = damping_time(p) if tau is None else tau
    x = traj.displacement
    h = traj.dt
    jerk = (x[4:] - 2.0 * x[3:-1] + 2.0 * x[1:-3] - x[:-4]) / (2.0 * h**3)
    v = (x[3:-1] - x[1:-3]) / (2.0 * h)
    f_jerk = p.charge_e**2 * jerk / (6.0 * math.pi * p.eps0 * p.c**3)
    f_visc = -p.mass_m * v / tau if math.isfinite(tau) else np.zeros_like(v)
    return ForceSeries(traj.times[2:-2], f_jerk, f_visc, v)


@dataclass(frozen=True)
class BoundaryTerms:
    """Work done by the jerk force over a window, split by integration by parts.

    ``int F v dt = k [v a] - k int a^2 dt`` with ``k = e^2 / (6 pi eps0 c^3)``.
    The bracket is the term dropped for almost-periodic motion.
    """

    boundary: float
    retained: float
    t_start: float
    t_end: float

    @property
    def ratio(self) -> float:
        return abs(self.boundary) / abs(self.retained) if self.retained else math.inf


def boundary_terms(
    p: PhysicalParams,
    traj: ClassicalTrajectory,
    t_start: float | None = None,
    n_periods: int = 1,
) -> BoundaryTerms:
    """Evaluate both terms over ``n_periods`` periods starting at ``t_start``."""
    _require_samples(traj)
    x = traj.displacement
    v, a = _derivatives(x, traj.dt)
    times = traj.times[1:-1]
    t_start = float(times[0]) if t_start is None else t_start
    i0 = int(np.searchsorted(times, t_start))
    # Whole periods measured from the first sample actually used.
    i1 = i0 + int(round(n_periods * 2.0 * math.pi / p.omega0 / traj.dt))
    if i1 >= times.size or i1 - i0 < 4:
        raise ValueError("window does not fit inside the trajectory")
    k = p.charge_e**2 / (6.0 * math.pi * p.eps0 * p.c**3)
    boundary = k * (v[i1] * a[i1] - v[i0] * a[i0])
    seg = a[i0 : i1 + 1] ** 2
    retained = k * float(np.sum(0.5 * (seg[1:] + seg[:-1])) * traj.dt)
    return BoundaryTerms(float(boundary), retained, float(times[i0]), float(times[i1]))


@dataclass(frozen=True, eq=False)
class FourierEnergy:
    """Energy per discrete Fourier frequency, normalised to unit total."""

    omega: np.ndarray
    fraction: np.ndarray
    parseval_error: float
    resolution: float


def fourier_energy(traj: ClassicalTrajectory, n_fft: int | None = None) -> FourierEnergy:
    """``|dt sum r e^{-i w t}|^2`` on the FFT grid, zero-padded to ``n_fft``.

    Fractions are phase blind, so a time shift of the trajectory leaves them
    unchanged. ``parseval_error`` compares ``sum |X|^2 / (N dt)`` against
    ``dt sum |r|^2``.
    """
    n = traj.r.size
    n_fft = n if n_fft is None else max(int(n_fft), n)
    spec = np.fft.fft(traj.r, n=n_fft) * traj.dt
    energy = spec.real**2 + spec.imag**2
    lhs = float(np.sum(energy)) / (n_fft * traj.dt)
    rhs = traj.dt * float(np.sum(traj.r.real**2 + traj.r.imag**2))
    omega = 2.0 * math.pi * np.fft.fftfreq(n_fft, d=traj.dt)
    order = np.argsort(omega, kind="stable")
    return FourierEnergy(
        omega=omega[order],
        fraction=energy[order] / float(np.sum(energy)),
        parseval_error=abs(lhs - rhs) / rhs if rhs else 0.0,
        resolution=2.0 * math.pi / (n_fft * traj.dt),
    )


def classical_spectrum(
    traj: ClassicalTrajectory,
    bin_width: float | None = None,
    *,
    edges=None,
    window_widths: float = 50.0,
    points_per_bin: int = 2,
) -> SpectralDistribution:
    """Binned energy fractions of the trajectory's Fourier transform.

    Either ``edges`` or ``bin_width`` fixes the bins (default width
    ``1/(10 tau)`` over ``omega0 +/- window_widths/tau``). The transform is
    zero-padded until each bin holds at least ``points_per_bin`` FFT points.
    Fractions are normalised over the whole FFT grid, so mass outside the
    bins is missing from ``total_mass``.
    """
    tau = traj.tau
    if math.isfinite(tau) and traj.times[-1] - traj.times[0] < MIN_COVERAGE * tau * (1 - 1e-12):
        raise ResolutionError(
            f"trajectory covers less than {MIN_COVERAGE:g} tau; spectral resolution is too coarse"
        )
    if edges is None:
        if bin_width is None:
            if math.isinf(tau):
                raise ValueError("bin_width is required for an undamped trajectory")
            bin_width = 0.1 / tau
        half = window_widths / tau if math.isfinite(tau) else window_widths * bin_width
        n_bins = int(math.ceil(2.0 * half / bin_width))
        edges = traj.omega0 - 0.5 * n_bins * bin_width + bin_width * np.arange(n_bins + 1)
    edges = np.asarray(edges, dtype=np.float64)
    narrowest = float(np.min(np.diff(edges)))
    n_needed = int(math.ceil(points_per_bin * 2.0 * math.pi / (narrowest * traj.dt)))
    fe = fourier_energy(traj, n_fft=max(n_needed, traj.r.size))
    inside = (fe.omega >= edges[0]) & (fe.omega < edges[-1])
    return bin_masses(fe.omega[inside], fe.fraction[inside], edges, CLASSICAL)


def _spread_over_modes(spec: SpectralDistribution, m: ModeSet) -> np.ndarray:
    """Share each bin's mass among the modes inside it in proportion to lam^2."""
    idx = np.searchsorted(spec.bin_edges, m.omega, side="right") - 1
    ok = (idx >= 0) & (idx < spec.mass.size)
    w = np.where(ok, m.coupling**2, 0.0)
    per_bin = np.bincount(idx[ok], weights=w[ok], minlength=spec.mass.size)
    share = np.zeros(m.size)
    has = ok & (per_bin[np.clip(idx, 0, spec.mass.size - 1)] > 0)
    share[has] = spec.mass[idx[has]] * w[has] / per_bin[idx[has]]
    return share


def classical_field_entropy(
    spec: SpectralDistribution,
    p: PhysicalParams,
    modes: ModeSet | None = None,
    *,
    tau: float | None = None,
) -> EntropyReport:
    """Entropy of the energy fractions regarded as a distribution over field modes.

    With ``modes`` each bin's energy is shared among the modes inside it,
    weighted by ``lam^2`` (a dipole feeds a mode in proportion to its
    coupling). Without ``modes`` each bin is spread evenly over the
    ``rho(omega) d omega`` lattice modes of the box (``2 (L/2 pi)^3 4 pi w^2``
    in 3D, ``L / (pi c)`` in 1D), ignoring the angular pattern.
    Energy fractions stand in for probabilities here; that is a choice of
    statistical weight.
    """
    tau = damping_time(p) if tau is None else tau
    gamma = 1.0 / tau
    if modes is not None:
        probs = _spread_over_modes(spec, modes)
        return build_report(
            probs,
            p,
            gamma=gamma,
            dimension=modes.dimension,
            kind="classical",
            v0=v0_classical(p, tau) if modes.dimension == 3 else None,
        )
    mass = spec.mass
    centers = spec.centers
    if p.dimension == 3:
        rho = 8.0 * math.pi * centers**2 * (p.box_length / (2.0 * math.pi)) ** 3 / p.c**3
    else:
        rho = np.full_like(centers, p.box_length / (math.pi * p.c))
    counts = rho * spec.widths
    nz = mass > 0
    s = float(-np.sum(mass[nz] * np.log(mass[nz] / np.maximum(counts[nz], 1.0))))
    return build_report(
        None,
        p,
        gamma=gamma,
        dimension=p.dimension,
        kind="classical",
        v0=v0_classical(p, tau) if p.dimension == 3 else None,
        s_field=s,
        mode_mass=float(mass.sum()),
        n_modes=int(round(float(counts.sum()))),
    )
