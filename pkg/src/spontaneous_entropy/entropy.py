"""Diagonal entropy of the emitted field and its closed-form estimates.

All entropies are in nats. The exact value is ``-sum p ln p`` over the
per-mode probabilities (plus the atom term while the atom is still excited).
The closed forms replace the Lorentzian line by a flat one, so they differ from
the exact value by an additive O(1) constant; reports carry both together with
their difference so that only the L dependence has to be compared.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .dynamics import AmplitudeState, Evolution, evolve
from .modes import DEFAULT_WINDOW, ModeSet, shell_entropy_3d
from .params import (
    Flagged,
    PhysicalParams,
    phase_space_time,
    v0_3d,
    wavepacket_length,
)

__all__ = [
    "EntropyReport",
    "EntropySeries",
    "SmallBoxAverage",
    "diagonal_entropy",
    "binary_entropy",
    "emission_entropy",
    "entropy_time_series",
    "entropy_timescale",
    "entropy_multi_atom",
    "closed_form_entropies",
    "shell_entropy_report",
    "build_report",
    "small_box_average",
]

MASS_SLACK = 1e-9
APPROXIMATIONS = ("s_paper_3d", "s_paper_1d", "s_real_space_1d", "s_timescale", "s_volume_ratio")


def diagonal_entropy(probs, *, strict: bool = True, backend: str | None = None) -> float:
    """``-sum p ln p`` with ``0 ln 0 = 0``.

    Args:
        probs: non-negative probabilities. A total below one is allowed (the
            deficit is probability outside the enumerated modes).
        strict: when true, a total above ``1 + 1e-9`` is rejected.
        backend: kernel override, see ``_backend.get``.

    Raises:
        ValueError: negative or non-finite entries, or excess mass when strict.
    """
    p = np.ascontiguousarray(probs, dtype=np.float64).ravel()
    if p.size == 0:
        return 0.0
    if not np.all(np.isfinite(p)) or p.min() < 0:
        raise ValueError("probabilities must be finite and non-negative")
    if strict:
        total = float(np.sum(p))
        if total > 1.0 + MASS_SLACK:
            raise ValueError(f"probabilities sum to {total:.12g} > 1")
    return float(_backend.get(backend).plogp_sum(p))


def binary_entropy(q) -> np.ndarray | float:
    """Entropy of the two-outcome distribution (q, 1 - q)."""
    q = np.clip(np.asarray(q, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(q > 0, q * np.log(q), 0.0) - np.where(q < 1, (1 - q) * np.log1p(-q), 0.0)
    return float(h) if h.ndim == 0 else h


@dataclass(frozen=True)
class EntropyReport:
    """Exact diagonal entropy next to every closed-form estimate.

    Closed-form fields that do not apply to the report's dimension are None.
    ``regime`` maps each populated estimate to whether its validity condition
    holds; ``deltas`` holds ``a - b`` for every pair of populated fields.
    ``truncation_mass`` is signed: negative means the enumerated modes carry
    more than unit mass (possible in 3D where the coupling grows with
    frequency).
    """

    kind: str
    dimension: int
    s_exact: float
    atom_term: float
    p_excited: float
    mode_mass: float
    truncation_mass: float
    truncation_bound: float
    n_modes: int
    box_length: float
    gamma: float
    delta_omega: float
    s_paper_3d: float | None = None
    s_paper_1d: float | None = None
    s_real_space_1d: float | None = None
    s_timescale: float | None = None
    s_volume_ratio: float | None = None
    regime: dict = field(default_factory=dict)
    deltas: dict = field(default_factory=dict)

    @property
    def field_entropy(self) -> float:
        return self.s_exact - self.atom_term

    @property
    def normalized(self) -> bool:
        return self.p_excited + self.mode_mass <= 1.0 + MASS_SLACK

    def offset(self, name: str) -> float:
        """``s_exact`` minus the named closed form."""
        value = getattr(self, name)
        if value is None:
            raise ValueError(f"{name} does not apply to a {self.dimension}D report")
        return self.s_exact - value

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "dimension": self.dimension,
            "s_exact": self.s_exact,
            "atom_term": self.atom_term,
            "p_excited": self.p_excited,
            "mode_mass": self.mode_mass,
            "truncation_mass": self.truncation_mass,
            "truncation_bound": self.truncation_bound,
            "n_modes": self.n_modes,
            "box_length": self.box_length,
            "gamma": self.gamma,
            "delta_omega": self.delta_omega,
            "normalized": self.normalized,
            "regime": dict(self.regime),
            "deltas": dict(self.deltas),
        }
        for name in APPROXIMATIONS:
            out[name] = getattr(self, name)
        return out


def closed_form_entropies(
    p: PhysicalParams,
    delta_omega: float,
    dimension: int,
    *,
    v0: float | None = None,
    tau_em: float | None = None,
) -> tuple[dict, dict]:
    """Closed-form entropy estimates and their validity flags.

    ``delta_omega`` is the line HWHM. ``v0`` overrides the coherence volume
    (the classical one differs in form, not value). ``tau_em`` defaults to
    ``1 / (2 delta_omega)``, the field-intensity lifetime.
    """
    tau_em = 1.0 / (2.0 * delta_omega) if tau_em is None else tau_em
    values: dict = {}
    regime: dict = {}
    L = p.box_length
    if dimension == 3:
        v0 = v0_3d(p, delta_omega) if v0 is None else v0
        ratio = L**3 / v0
        values["s_paper_3d"] = math.log(L**3 * p.omega0**2 * delta_omega / (3.0 * math.pi * p.c**3))
        values["s_volume_ratio"] = math.log(ratio)
        regime["s_paper_3d"] = ratio > 1.0
        regime["s_volume_ratio"] = ratio > 1.0
    else:
        modes_per_hwhm = L * delta_omega / (2.0 * math.pi * p.c)
        dx = wavepacket_length(p, delta_omega)
        values["s_paper_1d"] = math.log(modes_per_hwhm)
        values["s_real_space_1d"] = math.log(L / dx)
        regime["s_paper_1d"] = modes_per_hwhm > 1.0
        regime["s_real_space_1d"] = L > dx
    values["s_timescale"] = entropy_timescale(p, tau_em)
    regime["s_timescale"] = True
    return values, regime


def build_report(
    probs,
    p: PhysicalParams,
    *,
    gamma: float,
    dimension: int,
    p_excited: float = 0.0,
    kind: str = "quantum",
    v0: float | None = None,
    backend: str | None = None,
    s_field: float | None = None,
    mode_mass: float | None = None,
    n_modes: int | None = None,
) -> EntropyReport:
    """Assemble an EntropyReport from per-mode probabilities.

    ``s_field``/``mode_mass``/``n_modes`` may be passed instead of ``probs``
    (``probs=None``) when the distribution was reduced elsewhere.
    """
    if probs is not None:
        arr = np.ascontiguousarray(probs, dtype=np.float64)
        s_field = diagonal_entropy(arr, strict=False, backend=backend)
        mode_mass = math.fsum(arr.tolist())
        n_modes = int(arr.size)
    atom_term = diagonal_entropy([p_excited], strict=False) if p_excited > 0 else 0.0
    trunc = 1.0 - p_excited - mode_mass
    pos = max(trunc, 0.0)
    bound = pos * (math.log(max(n_modes, 1)) - math.log(pos)) if pos > 0 else 0.0
    delta_omega = gamma / 2.0
    values, regime = closed_form_entropies(p, delta_omega, dimension, v0=v0)
    s_exact = s_field + atom_term
    regime["s_exact"] = trunc >= -MASS_SLACK
    named = [("s_exact", s_exact)] + [(k, values[k]) for k in APPROXIMATIONS if k in values]
    deltas = {f"{a}-{b}": va - vb for (a, va), (b, vb) in itertools.combinations(named, 2)}
    return EntropyReport(
        kind=kind,
        dimension=dimension,
        s_exact=s_exact,
        atom_term=atom_term,
        p_excited=float(p_excited),
        mode_mass=float(mode_mass),
        truncation_mass=float(trunc),
        truncation_bound=float(bound),
        n_modes=int(n_modes),
        box_length=p.box_length,
        gamma=gamma,
        delta_omega=delta_omega,
        regime=regime,
        deltas=deltas,
        **values,
    )


def emission_entropy(
    state: AmplitudeState, m: ModeSet, *, backend: str | None = None
) -> EntropyReport:
    """Diagonal entropy of ``state`` with all closed-form comparisons."""
    if state.c_modes.shape != (m.size,):
        raise ValueError("state does not match the mode set")
    return build_report(
        state.mode_probabilities,
        m.params,
        gamma=m.gamma,
        dimension=m.dimension,
        p_excited=state.p_excited,
        backend=backend,
    )


def shell_entropy_report(
    p: PhysicalParams,
    window_widths: float = DEFAULT_WINDOW,
    *,
    backend: str | None = None,
) -> EntropyReport:
    """Report for the long-time state on a 3D lattice shell, streamed."""
    shell = shell_entropy_3d(p, window_widths, backend=backend)
    return build_report(
        None,
        p,
        gamma=shell.gamma,
        dimension=3,
        s_field=shell.entropy,
        mode_mass=shell.mass,
        n_modes=shell.n_modes,
    )


@dataclass(frozen=True, eq=False)
class EntropySeries:
    times: np.ndarray
    s_exact: np.ndarray
    atom_term: np.ndarray
    truncation_mass: np.ndarray

    def rows(self):
        for row in zip(self.times, self.s_exact, self.atom_term, self.truncation_mass):
            yield tuple(float(x) for x in row)


def entropy_time_series(
    states: Evolution | Sequence[AmplitudeState],
    m: ModeSet,
    *,
    backend: str | None = None,
) -> EntropySeries:
    """Diagonal entropy (atom term included) at every sampled time."""
    if isinstance(states, Evolution):
        if states.modes is None:
            raise ValueError("mode amplitudes were not kept for this run")
        times = states.times
        pe = states.p_excited
        probs = states.modes.real**2 + states.modes.imag**2
    else:
        times = np.array([s.time for s in states])
        pe = np.array([s.p_excited for s in states])
        probs = np.stack([s.mode_probabilities for s in states]) if states else np.zeros((0, m.size))
    if probs.shape[1:] != (m.size,):
        raise ValueError("states do not match the mode set")
    kern = _backend.get(backend)
    field_s = np.array([kern.plogp_sum(np.ascontiguousarray(row)) for row in probs])
    atom = np.array([kern.plogp_sum(np.array([q])) for q in pe])
    trunc = 1.0 - pe - probs.sum(axis=1)
    return EntropySeries(np.asarray(times, dtype=np.float64), field_s + atom, atom, trunc)


def entropy_timescale(p: PhysicalParams, tau_em: float, box_length: float | None = None) -> float:
    """``ln(tau_ps / tau_em)`` with ``tau_ps = L/c + tau_em``."""
    if not tau_em > 0:
        raise ValueError(f"tau_em must be > 0, got {tau_em}")
    return math.log(phase_space_time(p, tau_em, box_length) / tau_em)


def entropy_multi_atom(n_atoms: int, p: PhysicalParams, delta_omega: float) -> Flagged:
    """``N ln(V / V0)`` for N independent emitters; flagged out of regime when V < V0."""
    if n_atoms < 0:
        raise ValueError("n_atoms must be >= 0")
    v0 = v0_3d(p, delta_omega)
    ratio = p.box_length**3 / v0
    value = n_atoms * math.log(ratio) if n_atoms else 0.0
    return Flagged(value, ratio >= 1.0)


@dataclass(frozen=True)
class SmallBoxAverage:
    """Time averages over a long run in a box comparable to the emission length."""

    mean_p_excited: float
    mean_bipartition_entropy: float
    coarse_entropy: float
    mean_field_entropy: float | None
    t_final: float
    n_samples: int
    norm_drift: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def small_box_average(
    m: ModeSet,
    p: PhysicalParams | None = None,
    t_final: float | None = None,
    *,
    n_samples: int = 20001,
    keep_modes: bool = False,
    **kwargs,
) -> SmallBoxAverage:
    """Integrate for ``t_final`` (default 200/Gamma) and average over samples.

    ``mean_bipartition_entropy`` averages the atom/field entanglement entropy
    ``h(P_e(t))``; ``coarse_entropy`` is ``h`` of the averaged population, the
    entropy an observer assigns after coarse-graining in time.
    """
    p = m.params if p is None else p
    t_final = 200.0 / m.gamma if t_final is None else t_final
    ev = evolve(m, p, t_final, n_samples=n_samples, keep_modes=keep_modes, **kwargs)
    pe = ev.p_excited
    mean_pe = float(np.mean(pe))
    field_mean = None
    if keep_modes:
        field_mean = float(np.mean(entropy_time_series(ev, m).s_exact))
    return SmallBoxAverage(
        mean_p_excited=mean_pe,
        mean_bipartition_entropy=float(np.mean(binary_entropy(pe))),
        coarse_entropy=float(binary_entropy(mean_pe)),
        mean_field_entropy=field_mean,
        t_final=float(t_final),
        n_samples=int(n_samples),
        norm_drift=ev.norm_drift,
    )
