"""Binned frequency distributions and the two line-shape fits.

Widths are half widths at half maximum throughout: a Lorentzian has no finite
variance, so ``hwhm`` is the only meaningful width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .dynamics import AmplitudeState
from .modes import ModeSet, ResolutionError

__all__ = [
    "QUANTUM",
    "CLASSICAL",
    "SpectralDistribution",
    "DecayFit",
    "LorentzFit",
    "FitError",
    "bin_masses",
    "bin_spectrum",
    "fit_exponential",
    "fit_lorentzian",
    "lorentzian_bin_mass",
    "mode_bin_edges",
]

QUANTUM = "quantum"
CLASSICAL = "classical"
MASS_SLACK = 1e-9


class FitError(RuntimeError):
    """A fit could not be carried out or did not converge."""


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """Mass per angular-frequency bin.

    For ``kind='quantum'`` the mass is photon probability; for
    ``kind='classical'`` it is the fraction of radiated energy.
    """

    bin_edges: np.ndarray
    mass: np.ndarray
    total_mass: float
    kind: str = QUANTUM

    def __post_init__(self) -> None:
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        mass = np.asarray(self.mass, dtype=np.float64)
        if edges.ndim != 1 or edges.size != mass.size + 1:
            raise ValueError("bin_edges must have one more entry than mass")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if np.any(mass < 0) or not np.all(np.isfinite(mass)):
            raise ValueError("bin masses must be finite and non-negative")
        if self.kind not in (QUANTUM, CLASSICAL):
            raise ValueError(f"unknown kind {self.kind!r}")
        edges.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "mass", mass)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def density(self) -> np.ndarray:
        return self.mass / self.widths

    @property
    def within_unit_mass(self) -> bool:
        return self.total_mass <= 1.0 + MASS_SLACK

    def rows(self):
        for lo, hi, w in zip(self.bin_edges[:-1], self.bin_edges[1:], self.mass):
            yield float(lo), float(hi), float(w)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "total_mass": self.total_mass,
            "bin_edges": self.bin_edges.tolist(),
            "mass": self.mass.tolist(),
        }


@dataclass(frozen=True)
class DecayFit:
    rate: float
    amplitude: float
    residual: float
    fit_window: tuple[float, float]
    n_samples: int

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "amplitude": self.amplitude,
            "residual": self.residual,
            "fit_window": list(self.fit_window),
            "n_samples": self.n_samples,
        }


@dataclass(frozen=True)
class LorentzFit:
    center: float
    hwhm: float
    amplitude: float
    residual: float
    fit_window: tuple[float, float]
    n_bins: int
    n_iterations: int

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "hwhm": self.hwhm,
            "amplitude": self.amplitude,
            "residual": self.residual,
            "fit_window": list(self.fit_window),
            "n_bins": self.n_bins,
            "n_iterations": self.n_iterations,
        }


def bin_masses(omega, prob, edges, kind: str = QUANTUM) -> SpectralDistribution:
    """Sum point masses ``prob`` at frequencies ``omega`` into bins.

    Points outside ``[edges[0], edges[-1])`` are an error rather than being
    silently dropped, since that would break mass conservation.
    """
    omega = np.asarray(omega, dtype=np.float64)
    prob = np.asarray(prob, dtype=np.float64)
    edges = np.asarray(edges, dtype=np.float64)
    idx = np.searchsorted(edges, omega, side="right") - 1
    if idx.size and (idx.min() < 0 or idx.max() >= edges.size - 1):
        raise ValueError("some frequencies fall outside the bin edges")
    mass = np.bincount(idx, weights=prob, minlength=edges.size - 1)
    return SpectralDistribution(edges, mass, math.fsum(prob.tolist()), kind)


def mode_bin_edges(m: ModeSet, bin_width: float) -> np.ndarray:
    """Equal-width edges covering every mode of ``m``.

    In 1D the first edge sits half a lattice step below the lowest mode, so no
    mode lands on an edge. In 3D the shell window's lower bound is used.
    """
    lo = float(m.omega[0]) - 0.5 * m.spacing if m.dimension == 1 else float(m.window[0])
    top = float(m.omega[-1])
    n_bins = int(math.floor((top - lo) / bin_width)) + 1
    return lo + bin_width * np.arange(n_bins + 1, dtype=np.float64)


def bin_spectrum(state: AmplitudeState, m: ModeSet, bin_width: float) -> SpectralDistribution:
    """Photon probability per frequency bin for ``state``.

    Raises ``ResolutionError`` when ``bin_width`` is below twice the mode
    spacing (fewer than two modes per bin on average).
    """
    if state.c_modes.shape != (m.size,):
        raise ValueError("state does not match the mode set")
    minimal = 2.0 * m.spacing
    if not bin_width >= minimal * (1.0 - 1e-12):
        raise ResolutionError(
            f"bin width {bin_width:.6g} under-resolves the mode spacing; use at least {minimal:.6g}"
        )
    return bin_masses(m.omega, state.mode_probabilities, mode_bin_edges(m, bin_width), QUANTUM)


def fit_exponential(
    times,
    p_excited,
    window: tuple[float, float] | None = None,
    *,
    gamma: float | None = None,
) -> DecayFit:
    """Straight-line fit of ln P_e(t); ``rate`` is minus the slope.

    ``window`` defaults to ``[1/gamma, 4/gamma]`` when ``gamma`` is given,
    otherwise to the full sample range.
    """
    t = np.asarray(times, dtype=np.float64)
    pe = np.asarray(p_excited, dtype=np.float64)
    if t.shape != pe.shape:
        raise ValueError("times and p_excited must have the same shape")
    if window is None:
        window = (1.0 / gamma, 4.0 / gamma) if gamma else (float(t.min()), float(t.max()))
    t_lo, t_hi = float(window[0]), float(window[1])
    sel = (t >= t_lo) & (t <= t_hi)
    if sel.sum() < 10:
        raise FitError(f"only {int(sel.sum())} samples in window [{t_lo:g}, {t_hi:g}]; need 10")
    ts, ps = t[sel], pe[sel]
    bad = ps <= 0
    if bad.any():
        first = float(ts[np.argmax(bad)])
        raise FitError(
            f"P_e <= 0 inside the fit window at t = {first:g}; trim the window to end before it"
        )
    logp = np.log(ps)
    slope, intercept = np.polyfit(ts, logp, 1)
    resid = logp - (slope * ts + intercept)
    return DecayFit(
        rate=float(-slope),
        amplitude=float(math.exp(intercept)),
        residual=float(np.sqrt(np.mean(resid**2))),
        fit_window=(t_lo, t_hi),
        n_samples=int(ts.size),
    )


def lorentzian_bin_mass(edges, amplitude: float, center: float, hwhm: float) -> np.ndarray:
    """Exact mass of ``amplitude * (hwhm/pi) / ((w - center)^2 + hwhm^2)`` in each bin."""
    edges = np.asarray(edges, dtype=np.float64)
    cdf = np.arctan((edges - center) / hwhm) / math.pi
    return amplitude * np.diff(cdf)


def _weighted_quantiles(edges: np.ndarray, mass: np.ndarray, qs) -> np.ndarray:
    cum = np.concatenate([[0.0], np.cumsum(mass)])
    cum /= cum[-1]
    return np.interp(qs, cum, edges)


def fit_lorentzian(
    spec: SpectralDistribution,
    *,
    window: tuple[float, float] | None = None,
    max_iter: int = 200,
) -> LorentzFit:
    """Least-squares fit of a bin-integrated Lorentzian to ``spec``.

    Residuals are taken in linear space with equal weights. The start point is
    the mass-weighted median for the center and half the inter-quartile range
    for the width (for a Lorentzian the IQR is exactly twice the HWHM).
    """
    edges, mass = spec.bin_edges, spec.mass
    if window is not None:
        keep = (edges[:-1] >= window[0]) & (edges[1:] <= window[1])
        first = int(np.argmax(keep))
        n_keep = int(keep.sum())
        edges = edges[first : first + n_keep + 1]
        mass = mass[first : first + n_keep]
    if np.count_nonzero(mass) < 10:
        raise FitError(f"need at least 10 bins with nonzero mass, got {np.count_nonzero(mass)}")
    total = float(mass.sum())
    q25, q50, q75 = _weighted_quantiles(edges, mass, [0.25, 0.5, 0.75])
    scale = max(0.5 * (q75 - q25), float(np.min(np.diff(edges))))
    # Work in units of the initial width around the initial center.
    x_edges = (edges - q50) / scale
    y = mass / total

    def resid(theta):
        a, xc, g = theta
        return lorentzian_bin_mass(x_edges, a, xc, g) - y

    res = least_squares(
        resid,
        x0=[1.0, 0.0, 1.0],
        bounds=([0.0, -np.inf, 1e-9], [np.inf, np.inf, np.inf]),
        x_scale="jac",
        xtol=1e-14,
        ftol=1e-14,
        gtol=1e-14,
        max_nfev=max_iter,
    )
    rms = float(np.sqrt(np.mean(res.fun**2))) * total
    if res.status <= 0:
        raise FitError(f"Lorentzian fit did not converge ({res.message}); final RMS residual {rms:.3g}")
    a, xc, g = res.x
    return LorentzFit(
        center=float(q50 + xc * scale),
        hwhm=float(g * scale),
        amplitude=float(a * total),
        residual=rms,
        fit_window=(float(edges[0]), float(edges[-1])),
        n_bins=int(mass.size),
        n_iterations=int(res.nfev),
    )
