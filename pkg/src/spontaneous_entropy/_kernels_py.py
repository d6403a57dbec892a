"""Pure-Python (numpy) implementations of the hot kernels.

These mirror ``_kernels.pyx`` function for function and are used whenever the
compiled extension is unavailable or ``SPONTANEOUS_ENTROPY_BACKEND=python``.
"""
from __future__ import annotations

import math

import numpy as np

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


def _make_rhs(lam, omega, omega0, interaction):
    det = omega - omega0
    n = lam.size

    if interaction:

        def rhs(t, y):
            ph = np.exp(1j * det * t)
            f = np.empty(n + 1, dtype=np.complex128)
            f[0] = -1j * np.sum(lam * np.conj(ph) * y[1:])
            f[1:] = -1j * lam * ph * y[0]
            return f

    else:

        def rhs(t, y):
            f = np.empty(n + 1, dtype=np.complex128)
            f[0] = -1j * (omega0 * y[0] + np.sum(lam * y[1:]))
            f[1:] = -1j * (omega * y[1:] + lam * y[0])
            return f

    return rhs


def integrate(
    y0,
    lam,
    omega,
    omega0,
    interaction,
    t0,
    sample_times,
    rtol,
    atol,
    h0,
    max_steps,
    keep_modes,
):
    """Adaptive Dormand-Prince integration of the single-excitation equations.

    Steps are clipped so that every entry of ``sample_times`` is hit exactly.
    Returns ``(samples, norms, n_steps, n_rejected, status, t_reached)``.
    """
    y = np.array(y0, dtype=np.complex128)
    lam = np.asarray(lam, dtype=np.float64)
    omega = np.asarray(omega, dtype=np.float64)
    sample_times = np.asarray(sample_times, dtype=np.float64)
    rhs = _make_rhs(lam, omega, omega0, interaction)

    n_samples = sample_times.size
    width = y.size if keep_modes else 1
    out = np.zeros((n_samples, width), dtype=np.complex128)
    norms = np.zeros(n_samples, dtype=np.float64)

    t = float(t0)
    h = float(h0)
    steps = 0
    rejected = 0
    k1 = rhs(t, y)
    for i in range(n_samples):
        target = sample_times[i]
        while t < target:
            if steps + rejected >= max_steps:
                return out, norms, steps, rejected, STATUS_MAX_STEPS, t
            remaining = target - t
            clipped = h >= remaining
            hs = remaining if clipped else h
            k2 = rhs(t + C2 * hs, y + hs * (A21 * k1))
            k3 = rhs(t + C3 * hs, y + hs * (A31 * k1 + A32 * k2))
            k4 = rhs(t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3))
            k5 = rhs(t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
            k6 = rhs(
                t + hs,
                y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
            )
            y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            t_new = target if clipped else t + hs
            k7 = rhs(t_new, y_new)
            err = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = math.sqrt(float(np.mean((np.abs(err) / scale) ** 2)))
            if err_norm <= 1.0:
                steps += 1
                t = t_new
                y = y_new
                k1 = k7
                fac = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * err_norm**-0.2))
                h = max(h, hs * fac) if clipped else hs * fac
            else:
                rejected += 1
                h = hs * max(0.2, 0.9 * err_norm**-0.2)
                if h < 1e-14 * max(1.0, abs(t)):
                    return out, norms, steps, rejected, STATUS_UNDERFLOW, t
        if keep_modes:
            out[i, :] = y
        else:
            out[i, 0] = y[0]
        norms[i] = float(np.sum(y.real**2 + y.imag**2))
    return out, norms, steps, rejected, STATUS_OK, t


def plogp_sum(p):
    """-sum p ln p with 0 ln 0 = 0 (numpy's pairwise summation)."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def transverse_pair(khat):
    """Orthonormal polarisation pair built by the smallest-component rule.

    ``khat`` has shape (n, 3) and unit rows. The first vector is
    ``khat x e_j`` (normalised) with ``j`` the index of the smallest
    ``|khat_j|`` (lowest index on ties); the second is ``khat x u1``.
    Returns ``(u1, u2)`` as (n, 3) arrays.
    """
    khat = np.asarray(khat, dtype=np.float64)
    j = np.argmin(np.abs(khat), axis=1)
    axis = np.zeros_like(khat)
    axis[np.arange(khat.shape[0]), j] = 1.0
    u1 = np.cross(khat, axis)
    u1 /= np.linalg.norm(u1, axis=1)[:, None]
    u2 = np.cross(khat, u1)
    return u1, u2


def shell_entropy(dk, k_lo, k_hi, omega0, gamma, d2, volume, c):
    """Stream the long-time mode distribution over a 3D lattice shell.

    Lattice points ``k = dk * n`` with ``k_lo < |k| < k_hi`` are visited one
    ``n_x`` slab at a time; each contributes two polarisations with
    probability ``lam^2 / ((omega - omega0)^2 + gamma^2 / 4)`` where
    ``lam^2 = d2 * u_z^2 * omega / (2 V)`` (dipole along z).
    Returns ``(entropy, mass, n_modes, p_max)``.
    """
    r = int(math.ceil(k_hi / dk))
    n = np.arange(-r, r + 1, dtype=np.int64)
    ny, nz = np.meshgrid(n, n, indexing="ij")
    ny = ny.ravel()
    nz = nz.ravel()
    lo2 = k_lo * k_lo
    hi2 = k_hi * k_hi
    s_parts = []
    m_parts = []
    count = 0
    p_max = 0.0
    for nx in n:
        n2 = nx * nx + ny * ny + nz * nz
        k2 = n2.astype(np.float64) * dk * dk
        sel = (k2 > lo2) & (k2 < hi2)
        if not sel.any():
            continue
        kn = np.sqrt(k2[sel])
        khat = np.stack(
            [np.full(kn.size, nx * dk), ny[sel] * dk, nz[sel] * dk], axis=1
        ) / kn[:, None]
        u1, u2 = transverse_pair(khat)
        w = c * kn
        lor = 1.0 / ((w - omega0) ** 2 + 0.25 * gamma * gamma)
        base = d2 * w / (2.0 * volume) * lor
        for u in (u1, u2):
            prob = base * u[:, 2] ** 2
            s_parts.append(plogp_sum(prob))
            m_parts.append(float(np.sum(prob)))
            if prob.size:
                p_max = max(p_max, float(prob.max()))
        count += 2 * kn.size
    return math.fsum(s_parts), math.fsum(m_parts), count, p_max
