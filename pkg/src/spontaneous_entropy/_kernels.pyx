# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, log, fabs, ceil, pow

cnp.import_array()

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef enum:
    STATUS_OK = 0
    STATUS_UNDERFLOW = 1
    STATUS_MAX_STEPS = 2


cdef void _rhs(double t, double complex[::1] y, double complex[::1] f,
               const double[::1] lam, const double[::1] omega, double omega0,
               bint interaction, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t k
    cdef double re0 = y[0].real, im0 = y[0].imag
    cdef double acc_re = 0.0, acc_im = 0.0
    cdef double c, s, yr, yi, l, phase
    if interaction:
        for k in range(n):
            phase = (omega[k] - omega0) * t
            c = cos(phase)
            s = sin(phase)
            l = lam[k]
            yr = y[k + 1].real
            yi = y[k + 1].imag
            # lam * conj(ph) * y_k
            acc_re += l * (c * yr + s * yi)
            acc_im += l * (c * yi - s * yr)
            # -i * lam * ph * y0
            f[k + 1] = l * (c * im0 + s * re0) + 1j * (-l * (c * re0 - s * im0))
        f[0] = acc_im - 1j * acc_re
    else:
        for k in range(n):
            l = lam[k]
            yr = y[k + 1].real
            yi = y[k + 1].imag
            acc_re += l * yr
            acc_im += l * yi
            # -i * (omega_k y_k + lam y0)
            f[k + 1] = (omega[k] * yi + l * im0) - 1j * (omega[k] * yr + l * re0)
        f[0] = (omega0 * im0 + acc_im) - 1j * (omega0 * re0 + acc_re)


def integrate(y0, lam, omega, double omega0, bint interaction, double t0,
              sample_times, double rtol, double atol, double h0,
              long max_steps, bint keep_modes):
    """Adaptive Dormand-Prince integration; returns
    ``(samples, norms, n_steps, n_rejected, status, t_reached)``."""
    cdef double complex[::1] y = np.array(y0, dtype=np.complex128)
    cdef const double[::1] lam_v = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const double[::1] omega_v = np.ascontiguousarray(omega, dtype=np.float64)
    cdef const double[::1] ts = np.ascontiguousarray(sample_times, dtype=np.float64)
    cdef Py_ssize_t m = y.shape[0]
    cdef Py_ssize_t n = m - 1
    cdef Py_ssize_t n_samples = ts.shape[0]
    cdef Py_ssize_t width = m if keep_modes else 1

    out_arr = np.zeros((n_samples, width), dtype=np.complex128)
    norms_arr = np.zeros(n_samples, dtype=np.float64)
    cdef double complex[:, ::1] out = out_arr
    cdef double[::1] norms = norms_arr

    cdef double complex[::1] k1 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k2 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k3 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k4 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k5 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k6 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] k7 = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] y_new = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] swap

    cdef double t = t0, h = h0, hs, remaining, t_new, target
    cdef double err_norm, acc, sc, ay, ayn, fac, er, ei, nrm
    cdef double complex e
    cdef long steps = 0, rejected = 0
    cdef bint clipped
    cdef Py_ssize_t i, j
    cdef int status = STATUS_OK

    with nogil:
        _rhs(t, y, k1, lam_v, omega_v, omega0, interaction, n)
        for i in range(n_samples):
            target = ts[i]
            while t < target:
                if steps + rejected >= max_steps:
                    status = STATUS_MAX_STEPS
                    break
                remaining = target - t
                clipped = h >= remaining
                hs = remaining if clipped else h
                for j in range(m):
                    tmp[j] = y[j] + hs * (A21 * k1[j])
                _rhs(t + C2 * hs, tmp, k2, lam_v, omega_v, omega0, interaction, n)
                for j in range(m):
                    tmp[j] = y[j] + hs * (A31 * k1[j] + A32 * k2[j])
                _rhs(t + C3 * hs, tmp, k3, lam_v, omega_v, omega0, interaction, n)
                for j in range(m):
                    tmp[j] = y[j] + hs * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j])
                _rhs(t + C4 * hs, tmp, k4, lam_v, omega_v, omega0, interaction, n)
                for j in range(m):
                    tmp[j] = y[j] + hs * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j])
                _rhs(t + C5 * hs, tmp, k5, lam_v, omega_v, omega0, interaction, n)
                for j in range(m):
                    tmp[j] = y[j] + hs * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j]
                                          + A64 * k4[j] + A65 * k5[j])
                _rhs(t + hs, tmp, k6, lam_v, omega_v, omega0, interaction, n)
                for j in range(m):
                    y_new[j] = y[j] + hs * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j]
                                            + B5 * k5[j] + B6 * k6[j])
                t_new = target if clipped else t + hs
                _rhs(t_new, y_new, k7, lam_v, omega_v, omega0, interaction, n)
                acc = 0.0
                for j in range(m):
                    e = hs * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j]
                              + E6 * k6[j] + E7 * k7[j])
                    er = e.real
                    ei = e.imag
                    ay = sqrt(y[j].real * y[j].real + y[j].imag * y[j].imag)
                    ayn = sqrt(y_new[j].real * y_new[j].real + y_new[j].imag * y_new[j].imag)
                    sc = atol + rtol * (ay if ay > ayn else ayn)
                    acc += (er * er + ei * ei) / (sc * sc)
                err_norm = sqrt(acc / m)
                if err_norm <= 1.0:
                    steps += 1
                    t = t_new
                    swap = y
                    y = y_new
                    y_new = swap
                    swap = k1
                    k1 = k7
                    k7 = swap
                    if err_norm == 0.0:
                        fac = 5.0
                    else:
                        fac = 0.9 * pow(err_norm, -0.2)
                        if fac > 5.0:
                            fac = 5.0
                        if fac < 0.2:
                            fac = 0.2
                    if clipped:
                        if hs * fac > h:
                            h = hs * fac
                    else:
                        h = hs * fac
                else:
                    rejected += 1
                    fac = 0.9 * pow(err_norm, -0.2)
                    if fac < 0.2:
                        fac = 0.2
                    h = hs * fac
                    if h < 1e-14 * (fabs(t) if fabs(t) > 1.0 else 1.0):
                        status = STATUS_UNDERFLOW
                        break
            if status != STATUS_OK:
                break
            nrm = 0.0
            for j in range(m):
                nrm += y[j].real * y[j].real + y[j].imag * y[j].imag
            norms[i] = nrm
            if keep_modes:
                for j in range(m):
                    out[i, j] = y[j]
            else:
                out[i, 0] = y[0]
    return out_arr, norms_arr, steps, rejected, status, t


cdef double _pairwise(const double[::1] p, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t i, mid
    cdef double s = 0.0, x
    if hi - lo <= 128:
        for i in range(lo, hi):
            x = p[i]
            if x > 0.0:
                s -= x * log(x)
        return s
    mid = lo + (hi - lo) // 2
    return _pairwise(p, lo, mid) + _pairwise(p, mid, hi)


def plogp_sum(p):
    """-sum p ln p with 0 ln 0 = 0, fixed-order pairwise summation."""
    cdef const double[::1] v = np.ascontiguousarray(p, dtype=np.float64)
    cdef double s
    with nogil:
        s = _pairwise(v, 0, v.shape[0])
    return s


cdef inline void _neumaier(double *total, double *comp, double x) noexcept nogil:
    cdef double t = total[0] + x
    if fabs(total[0]) >= fabs(x):
        comp[0] += (total[0] - t) + x
    else:
        comp[0] += (x - t) + total[0]
    total[0] = t


def shell_entropy(double dk, double k_lo, double k_hi, double omega0,
                  double gamma, double d2, double volume, double c):
    """Stream the long-time distribution over a 3D lattice shell.

    Returns ``(entropy, mass, n_modes, p_max)``.
    """
    cdef long r = <long>ceil(k_hi / dk)
    cdef long nx, ny, nz, n2
    cdef double lo2 = k_lo * k_lo, hi2 = k_hi * k_hi
    cdef double k2, kn, kx, ky, kz, ax, ay, az, nrm, u1z, u2z, w, base, lor, prob
    cdef double s_tot = 0.0, s_comp = 0.0, m_tot = 0.0, m_comp = 0.0, p_max = 0.0
    cdef double g2 = 0.25 * gamma * gamma
    cdef long count = 0
    cdef int jmin
    with nogil:
        for nx in range(-r, r + 1):
            for ny in range(-r, r + 1):
                for nz in range(-r, r + 1):
                    n2 = nx * nx + ny * ny + nz * nz
                    k2 = (<double>n2) * dk * dk
                    if not (k2 > lo2 and k2 < hi2):
                        continue
                    kn = sqrt(k2)
                    kx = (nx * dk) / kn
                    ky = (ny * dk) / kn
                    kz = (nz * dk) / kn
                    ax = fabs(kx)
                    ay = fabs(ky)
                    az = fabs(kz)
                    jmin = 0
                    if ay < ax:
                        jmin = 1
                        if az < ay:
                            jmin = 2
                    elif az < ax:
                        jmin = 2
                    if jmin == 0:
                        nrm = sqrt(kz * kz + ky * ky)
                        u1z = -ky / nrm
                        u2z = kx * kz / nrm
                    elif jmin == 1:
                        nrm = sqrt(kz * kz + kx * kx)
                        u1z = kx / nrm
                        u2z = ky * kz / nrm
                    else:
                        nrm = sqrt(ky * ky + kx * kx)
                        u1z = 0.0
                        u2z = -(kx * kx + ky * ky) / nrm
                    w = c * kn
                    lor = 1.0 / ((w - omega0) * (w - omega0) + g2)
                    base = d2 * w / (2.0 * volume) * lor
                    prob = base * u1z * u1z
                    if prob > 0.0:
                        _neumaier(&s_tot, &s_comp, -prob * log(prob))
                        _neumaier(&m_tot, &m_comp, prob)
                        if prob > p_max:
                            p_max = prob
                    prob = base * u2z * u2z
                    if prob > 0.0:
                        _neumaier(&s_tot, &s_comp, -prob * log(prob))
                        _neumaier(&m_tot, &m_comp, prob)
                        if prob > p_max:
                            p_max = prob
                    count += 2
    return s_tot + s_comp, m_tot + m_comp, count, p_max
