"""Discretised cavity modes on periodic 1D and 3D lattices.

Wave vectors live on ``(2 pi / L) Z^d`` and only modes whose frequency falls in
``omega0 +/- W Gamma`` are kept. In 1D the coupling is frequency-flat and
calibrated so the golden-rule rate ``2 pi lam^2 rho(omega0)`` equals a target
``Gamma``; in 3D it follows ``lam = d . u sqrt(omega / (2 V))`` with the dipole
along z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _backend
from ._kernels_py import transverse_pair
from .params import PhysicalParams, gamma_ww

__all__ = [
    "Mode",
    "ModeSet",
    "ResolutionError",
    "MemoryCapError",
    "DEFAULT_WINDOW",
    "enumerate_1d",
    "enumerate_3d",
    "density_of_states",
    "empirical_density",
    "collective_modes",
    "lattice_shell_count",
    "shell_count_estimate",
    "ShellEntropy",
    "shell_entropy_3d",
]

DEFAULT_WINDOW = 50.0
DEFAULT_MODE_CAP = 4_000_000


class ResolutionError(ValueError):
    """The lattice is too coarse (or the shell empty) for the requested window."""


class MemoryCapError(MemoryError):
    """Enumeration would exceed the configured mode cap."""


@dataclass(frozen=True)
class Mode:
    omega_k: float
    weight: int
    coupling: float
    direction: tuple[float, float, float] | None = None
    polarization_index: int | None = None


@dataclass(frozen=True, eq=False)
class ModeSet:
    """Immutable table of field modes inside a frequency window.

    Column arrays are the primary storage; ``entries`` materialises Mode
    records on demand. ``theta`` is the angle between k and the dipole (pi/2
    in 1D, where the notion does not apply).
    """

    dimension: int
    params: PhysicalParams
    gamma: float
    window: tuple[float, float]
    omega: np.ndarray
    coupling: np.ndarray
    weight: np.ndarray
    theta: np.ndarray
    spacing: float
    directions: np.ndarray | None = None
    polarization: np.ndarray | None = None
    lattice_n2: np.ndarray | None = None
    reduced: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("omega", "coupling", "weight", "theta"):
            arr = getattr(self, name)
            arr.setflags(write=False)
        if self.omega.size and np.any(np.diff(self.omega) < 0):
            raise ValueError("modes must be sorted by frequency")
        if np.any(~np.isfinite(self.coupling)) or np.any(self.coupling < 0):
            raise ValueError("couplings must be finite and >= 0")

    def __len__(self) -> int:
        return int(self.omega.size)

    @property
    def size(self) -> int:
        return int(self.omega.size)

    @property
    def omega0(self) -> float:
        return self.params.omega0

    @property
    def detuning(self) -> np.ndarray:
        return self.omega - self.params.omega0

    @property
    def entries(self) -> tuple[Mode, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[Mode]:
        for i in range(self.size):
            direction = None
            pol = None
            if self.directions is not None:
                direction = tuple(float(x) for x in self.directions[i])
            if self.polarization is not None:
                pol = int(self.polarization[i])
            yield Mode(
                float(self.omega[i]),
                int(self.weight[i]),
                float(self.coupling[i]),
                direction,
                pol,
            )

    def rho(self, omega: float | np.ndarray) -> float | np.ndarray:
        return density_of_states(self, omega)

    def summary(self, n_samples: int = 5) -> dict:
        """JSON-ready digest: counts, window, and analytic rho samples."""
        lo, hi = self.window
        ws = np.linspace(lo, hi, n_samples + 2)[1:-1]
        return {
            "dimension": self.dimension,
            "reduced": self.reduced,
            "n_modes": self.size,
            "window": [lo, hi],
            "gamma": self.gamma,
            "spacing": self.spacing,
            "box_length": self.params.box_length,
            "coupling_sq_sum": float(np.sum(self.coupling**2)),
            "rho_samples": [
                {"omega": float(w), "rho": float(density_of_states(self, w))} for w in ws
            ],
        }


def _window(p: PhysicalParams, gamma: float, window_widths: float) -> tuple[float, float]:
    if not window_widths > 0:
        raise ValueError(f"window_widths must be > 0, got {window_widths}")
    half = window_widths * gamma
    return p.omega0 - half, p.omega0 + half


def enumerate_1d(
    p: PhysicalParams,
    window_widths: float = DEFAULT_WINDOW,
    gamma_target: float | None = None,
    *,
    min_modes_per_hwhm: float = 5.0,
) -> ModeSet:
    """Periodic 1D modes k = 2 pi n / L around omega0.

    The block of ``floor(2 W Gamma / spacing)`` consecutive lattice frequencies
    closest to being centred on omega0 is kept; each appears twice, +k then
    -k.
    The flat coupling satisfies ``2 pi lam^2 L / (pi c) = gamma_target``.

    Set ``min_modes_per_hwhm=0`` to allow coarse lattices (small boxes used to
    study recurrences).
    """
    gamma = gamma_ww(p) if gamma_target is None else float(gamma_target)
    if not gamma > 0:
        raise ValueError("the 1D coupling calibration needs a positive target rate")
    lo, hi = _window(p, gamma, window_widths)
    spacing = 2.0 * math.pi * p.c / p.box_length
    if min_modes_per_hwhm > 0 and spacing > gamma / min_modes_per_hwhm:
        min_length = 2.0 * math.pi * p.c * min_modes_per_hwhm / gamma
        raise ResolutionError(
            f"1D lattice spacing {spacing:.4g} exceeds Gamma/{min_modes_per_hwhm:g} = "
            f"{gamma / min_modes_per_hwhm:.4g}; need box_length >= {min_length:.6g}"
        )
    count = int(math.floor((hi - lo) / spacing * (1.0 + 1e-12)))
    if count < 1:
        raise ResolutionError(
            f"window [{lo:.6g}, {hi:.6g}] holds no lattice frequency at spacing {spacing:.4g}"
        )
    n_lo = max(1, int(math.ceil(p.omega0 / spacing - count / 2.0 - 1e-9)))
    n = np.arange(n_lo, n_lo + count, dtype=np.int64)
    freqs = spacing * n.astype(np.float64)
    omega = np.repeat(freqs, 2)
    lam = math.sqrt(gamma * p.c / (2.0 * p.box_length))
    m = omega.size
    return ModeSet(
        dimension=1,
        params=p,
        gamma=gamma,
        window=(lo, hi),
        omega=omega,
        coupling=np.full(m, lam),
        weight=np.ones(m, dtype=np.int64),
        theta=np.full(m, math.pi / 2),
        spacing=spacing,
        meta={"n_range": [int(n[0]), int(n[-1])], "lattice": "periodic"},
    )


def shell_count_estimate(p: PhysicalParams, window_widths: float, gamma: float | None = None) -> float:
    """Thin-shell estimate 4 pi k0^2 (2 W Gamma / c) (L / 2 pi)^3 * 2 of the mode count."""
    gamma = gamma_ww(p) if gamma is None else gamma
    k0 = p.omega0 / p.c
    return 4.0 * math.pi * k0**2 * (2.0 * window_widths * gamma / p.c) * (p.box_length / (2 * math.pi)) ** 3 * 2


def _shell_bounds(p: PhysicalParams, gamma: float, window_widths: float) -> tuple[float, float, float]:
    lo, hi = _window(p, gamma, window_widths)
    if lo <= 0:
        raise ResolutionError(
            f"window lower edge {lo:.4g} <= 0; reduce window_widths or Gamma"
        )
    return lo / p.c, hi / p.c, 2.0 * math.pi / p.box_length


def lattice_shell_count(p: PhysicalParams, window_widths: float = DEFAULT_WINDOW) -> int:
    """Exact number of lattice wave vectors in the shell (polarisations not counted)."""
    gamma = gamma_ww(p)
    k_lo, k_hi, dk = _shell_bounds(p, gamma, window_widths)
    r = int(math.ceil(k_hi / dk))
    n = np.arange(-r, r + 1, dtype=np.int64)
    sq = n * n
    yz = (sq[:, None] + sq[None, :]).ravel()
    total = 0
    for nx2 in sq:
        k2 = (nx2 + yz).astype(np.float64) * dk * dk
        total += int(np.count_nonzero((k2 > k_lo * k_lo) & (k2 < k_hi * k_hi)))
    return total


def enumerate_3d(
    p: PhysicalParams,
    window_widths: float = DEFAULT_WINDOW,
    *,
    max_modes: int = DEFAULT_MODE_CAP,
    min_points: int = 1000,
) -> ModeSet:
    """All lattice k in the frequency shell, two transverse polarisations each.

    Couplings are ``d (z . u_s) sqrt(omega / (2 V))``. Modes are ordered by
    frequency, then by lattice index, then polarisation, so repeated calls give
    bit-identical tables.
    """
    gamma = gamma_ww(p)
    if not gamma > 0:
        raise ValueError("3D enumeration needs a non-zero dipole to define the window")
    k_lo, k_hi, dk = _shell_bounds(p, gamma, window_widths)
    estimate = 2 * (4.0 * math.pi / 3.0) * (k_hi**3 - k_lo**3) / dk**3
    if estimate > max_modes:
        raise MemoryCapError(
            f"about {estimate:.3g} modes would be enumerated (cap {max_modes}); "
            "shrink box_length or window_widths, or use shell_entropy_3d"
        )
    r = int(math.ceil(k_hi / dk))
    n = np.arange(-r, r + 1, dtype=np.int64)
    ny, nz = np.meshgrid(n, n, indexing="ij")
    ny = ny.ravel()
    nz = nz.ravel()
    chunks = []
    for nx in n:
        n2 = nx * nx + ny * ny + nz * nz
        k2 = n2.astype(np.float64) * dk * dk
        sel = (k2 > k_lo * k_lo) & (k2 < k_hi * k_hi)
        if sel.any():
            chunks.append(np.stack([np.full(int(sel.sum()), nx), ny[sel], nz[sel]], axis=1))
    if not chunks:
        raise ResolutionError("the frequency shell contains no lattice points")
    idx = np.concatenate(chunks)
    if idx.shape[0] < min_points:
        raise ResolutionError(
            f"shell holds {idx.shape[0]} lattice points (< {min_points}); increase box_length"
        )
    n2 = np.sum(idx * idx, axis=1)
    order = np.lexsort((idx[:, 2], idx[:, 1], idx[:, 0], n2))
    idx = idx[order]
    n2 = n2[order]
    kvec = idx.astype(np.float64) * dk
    kn = np.sqrt(n2.astype(np.float64) * dk * dk)
    khat = kvec / kn[:, None]
    u1, u2 = transverse_pair(khat)
    freqs = p.c * kn
    amp = p.dipole_d * np.sqrt(p.hbar * freqs / (2.0 * p.eps0 * p.volume))
    # d . u can be negative; lam^2 is what enters the dynamics, keep |lam|
    lam = np.empty(2 * kn.size)
    lam[0::2] = np.abs(amp * u1[:, 2])
    lam[1::2] = np.abs(amp * u2[:, 2])
    theta = np.repeat(np.arccos(np.clip(khat[:, 2], -1.0, 1.0)), 2)
    return ModeSet(
        dimension=3,
        params=p,
        gamma=gamma,
        window=(k_lo * p.c, k_hi * p.c),
        omega=np.repeat(freqs, 2),
        coupling=lam,
        weight=np.ones(2 * kn.size, dtype=np.int64),
        theta=theta,
        spacing=1.0 / _rho_3d(p, p.omega0),
        directions=np.repeat(khat, 2, axis=0),
        polarization=np.tile(np.array([0, 1], dtype=np.int8), kn.size),
        lattice_n2=np.repeat(n2, 2),
        meta={"n_lattice_points": int(kn.size), "lattice": "periodic"},
    )


def _rho_3d(p: PhysicalParams, omega):
    return 4.0 * math.pi * np.asarray(omega) ** 2 / p.c**3 * (p.box_length / (2 * math.pi)) ** 3 * 2


def density_of_states(m: ModeSet, omega: float | np.ndarray) -> float | np.ndarray:
    """Analytic modes per unit angular frequency: L/(pi c) in 1D,
    8 pi omega^2 / c^3 (L / 2 pi)^3 in 3D (both polarisations)."""
    w = np.asarray(omega, dtype=np.float64)
    lo, hi = m.window
    if np.any(w < lo) or np.any(w > hi):
        raise ValueError(f"omega outside the mode window [{lo:.6g}, {hi:.6g}]")
    p = m.params
    if m.dimension == 1:
        out = np.full(w.shape, p.box_length / (math.pi * p.c))
    else:
        out = _rho_3d(p, w)
    return float(out) if out.ndim == 0 else out


def empirical_density(m: ModeSet, bin_width: float) -> tuple[np.ndarray, np.ndarray]:
    """Histogram estimate of rho: (bin centres, counts / bin_width) over the window."""
    lo, hi = m.window
    n_bins = int(math.floor((hi - lo) / bin_width))
    if n_bins < 1:
        raise ValueError("bin_width larger than the window")
    edges = lo + bin_width * np.arange(n_bins + 1)
    counts, _ = np.histogram(m.omega, bins=edges, weights=m.weight)
    return 0.5 * (edges[1:] + edges[:-1]), counts / bin_width


def collective_modes(m: ModeSet, bin_width: float | None = None) -> ModeSet:
    """Merge modes into collective modes coupling sqrt(sum lam^2).

    With ``bin_width=None`` modes sharing an identical frequency (the same
    |n|^2 on the lattice, or the +/-k pair in 1D) are merged, which leaves
    c0(t) exactly unchanged. A finite ``bin_width`` coarse-grains further and
    places each collective mode at the lam^2-weighted mean frequency.
    """
    if bin_width is None:
        if m.lattice_n2 is not None:
            keys = m.lattice_n2
        else:
            keys = np.round(m.omega / m.spacing).astype(np.int64) if m.spacing else m.omega
    else:
        keys = np.floor((m.omega - m.window[0]) / bin_width).astype(np.int64)
    uniq, inv = np.unique(keys, return_inverse=True)
    lam2 = np.bincount(inv, weights=m.coupling**2, minlength=uniq.size)
    counts = np.bincount(inv, weights=m.weight, minlength=uniq.size).astype(np.int64)
    if bin_width is None:
        freqs = np.zeros(uniq.size)
        freqs[inv] = m.omega
    else:
        wsum = np.bincount(inv, weights=m.coupling**2 * m.omega, minlength=uniq.size)
        plain = np.bincount(inv, weights=m.omega, minlength=uniq.size) / counts
        freqs = np.where(lam2 > 0, wsum / np.where(lam2 > 0, lam2, 1.0), plain)
    order = np.argsort(freqs, kind="stable")
    return ModeSet(
        dimension=m.dimension,
        params=m.params,
        gamma=m.gamma,
        window=m.window,
        omega=freqs[order],
        coupling=np.sqrt(lam2[order]),
        weight=counts[order],
        theta=np.full(uniq.size, math.nan),
        spacing=m.spacing,
        reduced=True,
        meta={**m.meta, "collective_bin_width": bin_width, "source_modes": m.size},
    )


@dataclass(frozen=True)
class ShellEntropy:
    """Long-time mode distribution on a 3D lattice shell, reduced on the fly."""

    entropy: float
    mass: float
    n_modes: int
    p_max: float
    gamma: float
    window: tuple[float, float]
    backend: str


def shell_entropy_3d(
    p: PhysicalParams,
    window_widths: float = DEFAULT_WINDOW,
    *,
    backend: str | None = None,
) -> ShellEntropy:
    """Entropy and mass of the long-time distribution on the 3D shell.

    Equivalent to building ``enumerate_3d`` and the asymptotic amplitudes,
    but streams the lattice so boxes with tens of millions of modes fit in
    memory.
    """
    gamma = gamma_ww(p)
    k_lo, k_hi, dk = _shell_bounds(p, gamma, window_widths)
    kern = _backend.get(backend)
    s, mass, count, p_max = kern.shell_entropy(
        dk, k_lo, k_hi, p.omega0, gamma, p.dipole_d**2, p.volume, p.c
    )
    if count == 0:
        raise ResolutionError("the frequency shell contains no lattice points")
    return ShellEntropy(
        entropy=float(s),
        mass=float(mass),
        n_modes=int(count),
        p_max=float(p_max),
        gamma=gamma,
        window=(k_lo * p.c, k_hi * p.c),
        backend="python" if kern.__name__.endswith("_py") else "compiled",
    )
