"""Physical constants and closed-form derived quantities.

Everything is expressed in a dimensionless scheme with hbar = c = eps0 = 1 and
the transition frequency ``omega0`` as the natural frequency scale. Lengths are
therefore in units of c/omega0 and times in units of 1/omega0.

Linewidths are half-widths at half maximum throughout: ``delta_omega`` is the
HWHM of the emitted Lorentzian, i.e. Gamma/2 for the quantum emitter and
1/(2 tau) for the classical dipole.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, NamedTuple

__all__ = [
    "PhysicalParams",
    "ParameterError",
    "Flagged",
    "gamma_ww",
    "tau_classical",
    "v0_3d",
    "v0_classical",
    "fourier_volume",
    "effective_solid_angle",
    "wavepacket_volume",
    "phase_space_time",
    "wavepacket_length",
    "linewidth",
    "load_params",
    "CONFIG_KEYS",
]

# JSON key -> dataclass field
CONFIG_KEYS = {
    "omega0": "omega0",
    "dipole_d": "dipole_d",
    "charge_e": "charge_e",
    "mass_m": "mass_m",
    "box_length": "box_length",
    "dimension": "dimension",
}


class ParameterError(ValueError):
    """Raised for parameter values outside the domain of a formula."""


class Flagged(NamedTuple):
    """A value returned together with a validity-regime flag."""

    value: float
    in_regime: bool


@dataclass(frozen=True)
class PhysicalParams:
    """Atom, oscillator and cavity constants in the dimensionless unit scheme.

    The defaults describe an emitter with Gamma = 1e-3 omega0, a classical
    dipole with 1/tau = 1e-3 omega0 and a 1D box whose lattice spacing is
    Gamma/20.
    """

    omega0: float = 1.0
    dipole_d: float = math.sqrt(3.0 * math.pi * 1e-3)
    charge_e: float = math.sqrt(6.0 * math.pi * 1e-3)
    mass_m: float = 1.0
    box_length: float = 40.0 * math.pi / 1e-3
    dimension: int = 1
    max_coupling_ratio: float = 0.1
    hbar: float = 1.0
    c: float = 1.0
    eps0: float = 1.0

    def __post_init__(self) -> None:
        if not self.omega0 > 0:
            raise ParameterError(f"omega0 must be > 0, got {self.omega0}")
        if not self.box_length > 0:
            raise ParameterError(f"box_length must be > 0, got {self.box_length}")
        if not self.dipole_d >= 0:
            raise ParameterError(f"dipole_d must be >= 0, got {self.dipole_d}")
        if not self.mass_m >= 0:
            raise ParameterError(f"mass_m must be >= 0, got {self.mass_m}")
        if self.dimension not in (1, 3):
            raise ParameterError(f"dimension must be 1 or 3, got {self.dimension}")
        if (self.hbar, self.c, self.eps0) != (1.0, 1.0, 1.0):
            raise ParameterError("hbar, c and eps0 are fixed to 1 by the unit scheme")
        ratio = gamma_ww(self) / self.omega0
        if ratio > self.max_coupling_ratio:
            raise ParameterError(
                f"Gamma/omega0 = {ratio:.3g} exceeds the weak-coupling cap "
                f"{self.max_coupling_ratio}; raise max_coupling_ratio to override"
            )

    @property
    def volume(self) -> float:
        """Box measure L**dimension (a length in 1D, a volume in 3D)."""
        return self.box_length ** self.dimension

    def with_overrides(self, **changes: Any) -> "PhysicalParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k in ("hbar", "c", "eps0"):
            d.pop(k)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PhysicalParams":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParameterError(f"unknown parameter keys: {', '.join(unknown)}")
        kwargs = dict(data)
        if "dimension" in kwargs:
            dim = kwargs["dimension"]
            if isinstance(dim, float) and dim.is_integer():
                kwargs["dimension"] = int(dim)
        return cls(**kwargs)


def load_params(path: str | Path) -> PhysicalParams:
    """Read a JSON parameter object (a bare object or one with a ``params`` block)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "params" in data and isinstance(data["params"], dict):
        data = data["params"]
    return PhysicalParams.from_dict(data)


def gamma_ww(p: PhysicalParams) -> float:
    """Weisskopf-Wigner decay rate d^2 omega0^3 / (3 pi hbar eps0 c^3)."""
    return p.dipole_d**2 * p.omega0**3 / (3.0 * math.pi * p.hbar * p.eps0 * p.c**3)


def tau_classical(p: PhysicalParams) -> float:
    """Radiation-reaction damping time 6 pi m eps0 c^3 / (e^2 omega0^2)."""
    if p.mass_m <= 0:
        raise ParameterError("tau is undefined for non-positive mass")
    if p.charge_e == 0:
        raise ParameterError("tau is infinite for zero charge")
    return 6.0 * math.pi * p.mass_m * p.eps0 * p.c**3 / (p.charge_e**2 * p.omega0**2)


def linewidth(p: PhysicalParams) -> float:
    """HWHM of the quantum emission line, Gamma/2."""
    return 0.5 * gamma_ww(p)


def v0_3d(p: PhysicalParams, delta_omega: float) -> float:
    """Coherence volume 3 pi c^3 / (omega0^2 delta_omega)."""
    if not delta_omega > 0:
        raise ParameterError(f"delta_omega must be > 0, got {delta_omega}")
    return 3.0 * math.pi * p.c**3 / (p.omega0**2 * delta_omega)


def v0_classical(p: PhysicalParams, tau: float | None = None) -> float:
    """Classical coherence volume 6 pi tau c^3 / omega0^2."""
    if tau is None:
        tau = tau_classical(p)
    if not tau > 0:
        raise ParameterError(f"tau must be > 0, got {tau}")
    return 6.0 * math.pi * tau * p.c**3 / p.omega0**2


def fourier_volume(p: PhysicalParams, delta_omega: float) -> float:
    """k-space volume omega0^2 delta_omega / (3 pi c^3); the reciprocal of ``v0_3d``."""
    return 1.0 / v0_3d(p, delta_omega)


def effective_solid_angle(p: PhysicalParams) -> float:
    """k-shell measure int k0^2 sin^3(theta) dtheta dphi = 8 pi omega0^2 / (3 c^2)."""
    return 8.0 * math.pi * p.omega0**2 / (3.0 * p.c**2)


def wavepacket_volume(p: PhysicalParams, r: float, delta_k: float) -> Flagged:
    """Far-field shell volume (8 pi / 3) r^2 / (2 delta_k) swept by the packet.

    Only meaningful for r >> c/delta_omega; outside that the value is still
    returned but flagged.
    """
    if not delta_k > 0:
        raise ParameterError(f"delta_k must be > 0, got {delta_k}")
    value = (8.0 * math.pi / 3.0) * r**2 / (2.0 * delta_k)
    in_regime = r > 1.0 / delta_k and r > p.c / p.omega0
    return Flagged(value, in_regime)


def phase_space_time(
    p: PhysicalParams, tau_em: float, box_length: float | None = None
) -> float:
    """Time to explore field and atom: L/c + tau_em.

    ``box_length`` overrides ``p.box_length``; it may be 0 to take the
    degenerate no-cavity limit, which a PhysicalParams cannot represent.
    """
    if not tau_em > 0:
        raise ParameterError(f"tau_em must be > 0, got {tau_em}")
    length = p.box_length if box_length is None else box_length
    if length < 0:
        raise ParameterError(f"box length must be >= 0, got {length}")
    return length / p.c + tau_em


def wavepacket_length(p: PhysicalParams, delta_omega: float) -> float:
    """Packet length delta_x = 1/(2 delta_k) with delta_k = delta_omega / c."""
    if not delta_omega > 0:
        raise ParameterError(f"delta_omega must be > 0, got {delta_omega}")
    return p.c / (2.0 * delta_omega)
