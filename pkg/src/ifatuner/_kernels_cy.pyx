# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid-evaluation kernels.

Same calling convention and clipping semantics as ifatuner._kernels_py; see
that module for the parameter-vector layout. This one exists purely for
speed on dense sweeps and root refinement.
"""

import numpy as np

from libc.math cimport cos, sin, tan, isfinite, isnan, M_PI

BACKEND = "compiled"

cdef double CLIP = 1e9


cdef inline double complex _clipz(double complex z):
    cdef double mag = abs(z)
    if mag > CLIP:
        if not isfinite(mag):
            return CLIP + 0j
        return z * (CLIP / mag)
    if isnan(z.real) or isnan(z.imag):
        return CLIP + 0j
    return z


cdef inline double complex _par(double complex za, double complex zb):
    cdef double complex den
    if abs(za) >= CLIP:
        return _clipz(zb)
    if abs(zb) >= CLIP:
        return _clipz(za)
    den = za + zb
    if den == 0:
        return CLIP + 0j
    return _clipz(za * zb / den)


cdef inline double complex _line(double z0, double theta, double complex zl):
    cdef double ct, st
    cdef double complex den
    if theta == 0.0:
        return zl
    ct = cos(theta)
    st = sin(theta)
    if abs(zl) >= CLIP:
        if st == 0.0:
            return CLIP + 0j
        return _clipz(-1j * z0 * ct / st)
    den = z0 * ct + 1j * zl * st
    if den == 0:
        return CLIP + 0j
    return _clipz(z0 * (zl * ct + 1j * z0 * st) / den)


cdef inline double complex _reso(double w, const double* p):
    cdef double l1, c1, c2, r1, b
    cdef double complex z_c1
    if p[7] == 0.0:
        return 0
    l1 = p[8]
    c1 = p[9]
    c2 = p[10]
    r1 = p[11]
    if p[12] == 0.0 and p[13] == 0.0:
        b = w * c1 - 1.0 / (w * l1)
        if b < 1.0 / CLIP and b > -1.0 / CLIP:
            if w * w * l1 * c1 <= 1.0:
                return 1j * CLIP
            return -1j * CLIP
        return -1j / b
    z_c1 = -1j / (w * c1)
    if p[13] != 0.0:
        z_c1 = _par(z_c1, r1 + 0j)
    if p[12] != 0.0:
        z_c1 = z_c1 + (-1j / (w * c2))
    return _par(1j * w * l1, z_c1)


cdef inline double complex _zin_one(double f, const double* p):
    cdef double w = 2.0 * M_PI * f
    cdef double scale = f / p[3]
    cdef double th_o = p[1] * scale
    cdef double th_s = p[2] * scale
    cdef double complex z_end, z_open, z_arm, z_a, z_b
    z_end = p[4] + 1j * p[5]
    z_open = _line(p[0], th_o, z_end)
    z_arm = _clipz(_reso(w, p) + z_open)
    z_b = _line(p[0], (1.0 - p[6]) * th_s, z_arm)
    z_a = _clipz(1j * p[0] * tan(p[6] * th_s))
    return _par(z_a, z_b)


cdef inline double complex _res_one(double f, const double* p):
    cdef double w = 2.0 * M_PI * f
    cdef double scale = f / p[3]
    cdef double th_o = p[1] * scale
    cdef double th_s = p[2] * scale
    cdef double complex z_end, z_open, z_short
    z_end = p[4] + 1j * p[5]
    z_open = _line(p[0], th_o, z_end)
    z_short = _clipz(1j * p[0] * tan(th_s))
    return _reso(w, p) - (z_short - z_open)


def zin_grid(freqs, p):
    """Input impedance at the feed tap over a frequency grid, complex array."""
    cdef double[::1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef double[::1] pp = np.ascontiguousarray(p, dtype=np.float64)
    out = np.empty(f.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    if pp.shape[0] < 14:
        raise ValueError("parameter vector too short")
    for i in range(f.shape[0]):
        o[i] = _zin_one(f[i], &pp[0])
    return out


def residual_grid(freqs, p):
    """Series-resonance residual Z_LC - (Z_short - Z_open) over a grid."""
    cdef double[::1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef double[::1] pp = np.ascontiguousarray(p, dtype=np.float64)
    out = np.empty(f.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    if pp.shape[0] < 14:
        raise ValueError("parameter vector too short")
    for i in range(f.shape[0]):
        o[i] = _res_one(f[i], &pp[0])
    return out


def residual_im(double f, p):
    """Scalar Im of the resonance residual at one frequency."""
    cdef double[::1] pp = np.ascontiguousarray(p, dtype=np.float64)
    if pp.shape[0] < 14:
        raise ValueError("parameter vector too short")
    return _res_one(f, &pp[0]).imag
