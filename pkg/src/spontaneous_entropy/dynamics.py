"""Single-excitation dynamics of a two-level atom coupled to a ModeSet.

The state is ``c0 |e,0> + sum_k c_k |g,1_k>``. In the lab frame

    dc0/dt  = -i omega0 c0 - i sum_k lam_k c_k
    dc_k/dt = -i omega_k c_k - i lam_k c0

and the interaction frame strips the free phases, ``C0 = c0 exp(i omega0 t)``
and ``C_k = c_k exp(i omega_k t)``. Integration happens in the interaction
frame by default so step sizes are set by the detunings rather than by
omega0. No renormalisation is applied: norm drift is reported, not hidden.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from . import _backend
from .modes import ModeSet
from .params import PhysicalParams

__all__ = [
    "INTERACTION",
    "LAB",
    "AmplitudeState",
    "Evolution",
    "Revival",
    "IntegrationError",
    "OracleSizeError",
    "NORM_DRIFT_LIMIT",
    "ORACLE_MAX_MODES",
    "initial_state",
    "change_frame",
    "energy_expectation",
    "evolve",
    "evolve_oracle",
    "asymptotic_amplitudes",
    "time_reversal_error",
    "recurrence_scan",
]

INTERACTION = "interaction"
LAB = "lab"
NORM_DRIFT_LIMIT = 1e-6
ORACLE_MAX_MODES = 5000


class IntegrationError(RuntimeError):
    """The adaptive integrator could not reach the requested time."""


class OracleSizeError(ValueError):
    """The mode set is too large for dense diagonalisation."""


@dataclass(frozen=True, eq=False)
class AmplitudeState:
    time: float
    c0: complex
    c_modes: np.ndarray
    frame: str = INTERACTION

    def __post_init__(self) -> None:
        if self.frame not in (INTERACTION, LAB):
            raise ValueError(f"unknown frame {self.frame!r}")

    @property
    def p_excited(self) -> float:
        return float(abs(self.c0) ** 2)

    @property
    def mode_probabilities(self) -> np.ndarray:
        c = self.c_modes
        return c.real**2 + c.imag**2

    @property
    def mode_mass(self) -> float:
        return float(np.sum(self.mode_probabilities))

    @property
    def norm(self) -> float:
        return self.p_excited + self.mode_mass


@dataclass(frozen=True, eq=False)
class Evolution:
    """Sampled trajectory of the amplitudes.

    ``modes`` is None when the run was made with ``keep_modes=False``.
    """

    times: np.ndarray
    c0: np.ndarray
    modes: np.ndarray | None
    norms: np.ndarray
    frame: str
    n_steps: int
    n_rejected: int
    method: str

    @property
    def p_excited(self) -> np.ndarray:
        return self.c0.real**2 + self.c0.imag**2

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(1.0 - self.norms))) if self.norms.size else 0.0

    @property
    def flagged(self) -> bool:
        return self.norm_drift > NORM_DRIFT_LIMIT

    def __len__(self) -> int:
        return int(self.times.size)

    def state(self, i: int) -> AmplitudeState:
        if self.modes is None:
            raise ValueError("mode amplitudes were not kept for this run")
        return AmplitudeState(float(self.times[i]), complex(self.c0[i]), self.modes[i], self.frame)

    @property
    def states(self) -> list[AmplitudeState]:
        return [self.state(i) for i in range(len(self))]

    @property
    def final(self) -> AmplitudeState:
        return self.state(len(self) - 1)


@dataclass(frozen=True)
class Revival:
    """One re-excitation event: population minimum (onset) and the peak after it."""

    onset: float
    peak_time: float
    peak_population: float
    prominence: float


def initial_state(m: ModeSet) -> AmplitudeState:
    return AmplitudeState(0.0, 1.0 + 0.0j, np.zeros(m.size, dtype=np.complex128), INTERACTION)


def change_frame(state: AmplitudeState, m: ModeSet, frame: str) -> AmplitudeState:
    if frame == state.frame:
        return state
    if not math.isfinite(state.time):
        raise ValueError("the t -> infinity state has no lab-frame representation")
    sign = -1.0 if frame == LAB else 1.0
    t = state.time
    c0 = state.c0 * np.exp(sign * 1j * m.omega0 * t)
    ck = state.c_modes * np.exp(sign * 1j * m.omega * t)
    return AmplitudeState(t, complex(c0), ck, frame)


def energy_expectation(state: AmplitudeState, m: ModeSet) -> float:
    """<H> for the rotating-wave Hamiltonian (ground-state energy set to 0)."""
    s = change_frame(state, m, LAB)
    ck = s.c_modes
    free = m.omega0 * abs(s.c0) ** 2 + float(np.sum(m.omega * (ck.real**2 + ck.imag**2)))
    coupling = 2.0 * float(np.real(np.conj(s.c0) * np.sum(m.coupling * ck)))
    return free + coupling


def _as_vector(state: AmplitudeState | None, m: ModeSet) -> np.ndarray:
    if state is None:
        state = initial_state(m)
    if state.time != 0.0:
        raise ValueError("initial states must be given at t = 0")
    if state.c_modes.shape != (m.size,):
        raise ValueError("initial state does not match the mode set")
    y = np.empty(m.size + 1, dtype=np.complex128)
    y[0] = state.c0
    y[1:] = state.c_modes
    return y


def _sample_grid(t_final: float, n_samples: int, sample_times) -> np.ndarray:
    if sample_times is not None:
        ts = np.asarray(sample_times, dtype=np.float64)
        if ts.ndim != 1 or ts.size == 0:
            raise ValueError("sample_times must be a non-empty 1D sequence")
        if np.any(np.diff(ts) < 0) or ts[0] < 0:
            raise ValueError("sample_times must be non-negative and sorted")
        return ts
    if not t_final > 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    return np.linspace(0.0, t_final, int(n_samples))


def evolve(
    m: ModeSet,
    p: PhysicalParams | None = None,
    t_final: float | None = None,
    *,
    n_samples: int = 201,
    sample_times=None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    frame: str = INTERACTION,
    initial: AmplitudeState | None = None,
    keep_modes: bool = True,
    max_steps: int = 20_000_000,
    backend: str | None = None,
) -> Evolution:
    """Integrate the coupled amplitude equations with adaptive Dormand-Prince 5(4).

    Starts from ``initial`` (default: atom excited, field empty) at t = 0 and
    records the state at ``sample_times`` or at ``n_samples`` evenly spaced
    times in [0, t_final].
    """
    p = m.params if p is None else p
    ts = _sample_grid(t_final if t_final is not None else -1.0, n_samples, sample_times)
    if frame not in (INTERACTION, LAB):
        raise ValueError(f"unknown frame {frame!r}")
    y0 = _as_vector(initial, m)
    interaction = frame == INTERACTION
    omega = np.ascontiguousarray(m.omega, dtype=np.float64)
    lam = np.ascontiguousarray(m.coupling, dtype=np.float64)
    if interaction:
        rate = max(float(np.max(np.abs(omega - p.omega0), initial=0.0)), float(np.sqrt(np.sum(lam**2))))
    else:
        rate = max(float(np.max(np.abs(omega), initial=0.0)), p.omega0)
    span = float(ts[-1]) if ts[-1] > 0 else 1.0
    h0 = min(span, 0.05 / rate) if rate > 0 else span
    kern = _backend.get(backend)
    out, norms, steps, rejected, status, t_reached = kern.integrate(
        y0, lam, omega, float(p.omega0), interaction, 0.0, ts,
        float(rtol), float(atol), float(h0), int(max_steps), bool(keep_modes),
    )
    if status == 1:
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} after {steps} steps "
            f"({rejected} rejected); loosen rtol={rtol:g}/atol={atol:g}"
        )
    if status == 2:
        raise IntegrationError(
            f"max_steps={max_steps} exhausted at t = {t_reached:.6g} of {ts[-1]:.6g}"
        )
    return Evolution(
        times=ts,
        c0=np.ascontiguousarray(out[:, 0]),
        modes=np.ascontiguousarray(out[:, 1:]) if keep_modes else None,
        norms=np.asarray(norms),
        frame=frame,
        n_steps=int(steps),
        n_rejected=int(rejected),
        method="dopri5-" + ("python" if kern.__name__.endswith("_py") else "compiled"),
    )


def evolve_oracle(
    m: ModeSet,
    p: PhysicalParams | None = None,
    times=None,
    *,
    frame: str = INTERACTION,
    initial: AmplitudeState | None = None,
    keep_modes: bool = True,
    max_modes: int = ORACLE_MAX_MODES,
) -> Evolution:
    """Exact amplitudes from dense diagonalisation of the (N+1)x(N+1) Hamiltonian.

    The matrix is built relative to omega0 (diagonal 0 and omega_k - omega0,
    couplings lam_k in the first row and column), so its propagator yields the
    interaction-frame c0 directly and avoids a large common phase.
    """
    p = m.params if p is None else p
    if m.size > max_modes:
        raise OracleSizeError(f"{m.size} modes exceeds the oracle cap of {max_modes}")
    if times is None:
        raise ValueError("times are required")
    ts = _sample_grid(-1.0, 0, times)
    det = m.omega - p.omega0
    n = m.size
    h = np.zeros((n + 1, n + 1))
    h[0, 1:] = m.coupling
    h[1:, 0] = m.coupling
    h[np.arange(1, n + 1), np.arange(1, n + 1)] = det
    energies, vecs = np.linalg.eigh(h)
    y0 = _as_vector(initial, m)
    a = vecs.T @ y0
    c0 = np.empty(ts.size, dtype=np.complex128)
    modes = np.empty((ts.size, n), dtype=np.complex128) if keep_modes else None
    norms = np.empty(ts.size)
    for i, t in enumerate(ts):
        coeff = np.exp(-1j * energies * t) * a
        if keep_modes:
            psi = vecs @ coeff
            c0[i] = psi[0]
            ck = psi[1:]
            if frame == INTERACTION:
                ck = ck * np.exp(1j * det * t)
            else:
                ck = ck * np.exp(-1j * p.omega0 * t)
            modes[i] = ck
            norms[i] = float(np.sum(psi.real**2 + psi.imag**2))
        else:
            c0[i] = vecs[0] @ coeff
            norms[i] = float(np.sum(np.abs(coeff) ** 2))
        if frame == LAB:
            c0[i] *= np.exp(-1j * p.omega0 * t)
    return Evolution(
        times=ts, c0=c0, modes=modes, norms=norms, frame=frame,
        n_steps=0, n_rejected=0, method="eigh",
    )


def asymptotic_amplitudes(m: ModeSet, p: PhysicalParams | None = None) -> AmplitudeState:
    """Long-time amplitudes ``lam / ((omega_k - omega0) + i Gamma/2)``.

    Returned in the interaction frame with ``time = inf`` and ``c0 = 0``; only
    the moduli are convention independent. ``Gamma`` is the ModeSet's rate
    (the calibration target in 1D, the Weisskopf-Wigner rate in 3D).
    """
    p = m.params if p is None else p
    gamma = m.gamma
    ck = m.coupling / ((m.omega - p.omega0) + 0.5j * gamma)
    return AmplitudeState(math.inf, 0.0j, ck.astype(np.complex128), INTERACTION)


def time_reversal_error(
    m: ModeSet,
    p: PhysicalParams | None = None,
    t: float = 1.0,
    **kwargs,
) -> float:
    """Evolve to t, conjugate the lab-frame state, evolve t again; distance to start.

    With a real Hamiltonian the round trip must return the conjugate of the
    initial state exactly; the returned max-abs deviation therefore measures
    integrator error only.
    """
    p = m.params if p is None else p
    fwd = evolve(m, p, sample_times=[t], **kwargs)
    lab = change_frame(fwd.final, m, LAB)
    reversed_state = AmplitudeState(0.0, complex(np.conj(lab.c0)), np.conj(lab.c_modes), INTERACTION)
    back = evolve(m, p, sample_times=[t], initial=reversed_state, **kwargs)
    end = change_frame(back.final, m, LAB)
    start = initial_state(m)
    dev0 = abs(end.c0 - np.conj(start.c0))
    devk = float(np.max(np.abs(end.c_modes - np.conj(start.c_modes)), initial=0.0))
    return float(max(dev0, devk))


def recurrence_scan(
    m: ModeSet,
    p: PhysicalParams | None = None,
    t_final: float | None = None,
    *,
    threshold: float = 0.1,
    min_prominence: float = 0.02,
    n_samples: int | None = None,
    evolution: Evolution | None = None,
    **kwargs,
) -> list[Revival]:
    """Re-excitation events of the atom in a finite box.

    A revival is a local maximum of |c0|^2 at least ``threshold`` times the
    initial peak and rising at least ``min_prominence`` above its left base.
    The left base (the population minimum before the rise) is reported as
    ``onset``: in a periodic box it sits at the light round-trip time L/c,
    while the peak trails it by roughly 2/Gamma.
    """
    p = m.params if p is None else p
    if evolution is None:
        if t_final is None:
            raise ValueError("t_final is required")
        if n_samples is None:
            per_trip = 50.0 * t_final * p.c / p.box_length
            n_samples = int(min(200_000, max(2001, per_trip)))
        evolution = evolve(m, p, t_final, n_samples=n_samples, keep_modes=False, **kwargs)
    pop = evolution.p_excited
    peak = float(pop[0]) if pop.size else 0.0
    if pop.size < 3 or peak == 0.0:
        return []
    idx, props = find_peaks(pop, height=threshold * peak, prominence=min_prominence)
    times = evolution.times
    out = []
    for j, i in enumerate(idx):
        base = int(props["left_bases"][j])
        out.append(
            Revival(
                onset=float(times[base]),
                peak_time=float(times[i]),
                peak_population=float(pop[i]),
                prominence=float(props["prominences"][j]),
            )
        )
    return out
