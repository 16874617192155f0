"""NumPy fallback for the grid-evaluation kernels.

Semantics are identical to the compiled backend (ifatuner._kernels_cy): the
same pole clipping, the same open-load special cases, the same parameter
packing. Model parameters travel as a flat float64 vector so both backends
share one calling convention:

    p[0]  z0              line characteristic impedance, ohm
    p[1]  theta_open_ref  radians at f_ref
    p[2]  theta_short_ref radians at f_ref
    p[3]  f_ref           Hz
    p[4]  z_end real part, ohm (open is encoded at the clip level)
    p[5]  z_end imaginary part, ohm
    p[6]  feed_fraction   0 = at the short, 1 = at the resonator
    p[7]  has_resonator   0/1 (0 = through-connection, Z_LC = 0)
    p[8]  l1, H
    p[9]  c1, F
    p[10] c2, F
    p[11] r1, ohm
    p[12] include_c2_in_rf 0/1
    p[13] include_r1_in_rf 0/1
"""

from __future__ import annotations

import numpy as np

CLIP_OHMS = 1e9
_OPEN = complex(CLIP_OHMS, 0.0)

N_PARAMS = 14

BACKEND = "python"


def _clip_arr(z):
    """Limit |z| elementwise to CLIP_OHMS; non-finite values collapse to open."""
    z = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z)
    over = mag > CLIP_OHMS
    if over.any():
        safe = np.where(over, mag, 1.0)
        z = np.where(over, z * (CLIP_OHMS / safe), z)
    bad = ~np.isfinite(z.real) | ~np.isfinite(z.imag)
    if bad.any():
        z = np.where(bad, _OPEN, z)
    return z


def _parallel_arr(za, zb):
    """Clip-aware elementwise parallel combination."""
    za = np.asarray(za, dtype=np.complex128)
    zb = np.asarray(zb, dtype=np.complex128)
    a_open = np.abs(za) >= CLIP_OHMS
    b_open = np.abs(zb) >= CLIP_OHMS
    den = za + zb
    zero = den == 0
    safe_den = np.where(zero, 1.0, den)
    z = za * zb / safe_den
    z = np.where(zero, _OPEN, z)
    z = np.where(b_open, za, z)
    z = np.where(a_open, zb, z)
    return _clip_arr(z)


def _line_arr(z0, theta, z_load):
    """Lossless-line transform of z_load through electrical length theta."""
    theta = np.asarray(theta, dtype=np.float64)
    z_load = np.asarray(z_load, dtype=np.complex128)
    ct = np.cos(theta)
    st = np.sin(theta)
    den = z0 * ct + 1j * z_load * st
    zero = den == 0
    safe_den = np.where(zero, 1.0, den)
    z = z0 * (z_load * ct + 1j * z0 * st) / safe_den
    z = np.where(zero, _OPEN, z)
    # ideal open load reduces to -j z0 cot(theta)
    load_open = np.abs(z_load) >= CLIP_OHMS
    if load_open.any():
        st_zero = st == 0
        safe_st = np.where(st_zero, 1.0, st)
        z_open = np.where(st_zero, _OPEN, -1j * z0 * ct / safe_st)
        z = np.where(load_open, z_open, z)
    ident = theta == 0.0
    if ident.any():
        z = np.where(ident, z_load, z)
    return _clip_arr(z)


def _resonator_arr(w, p):
    """Series impedance of the arm resonator over angular-frequency grid w."""
    if p[7] == 0.0:
        return np.zeros(w.shape, dtype=np.complex128)
    l1, c1, c2, r1 = p[8], p[9], p[10], p[11]
    if p[12] == 0.0 and p[13] == 0.0:
        b = w * c1 - 1.0 / (w * l1)
        pole = np.abs(b) < 1.0 / CLIP_OHMS
        safe_b = np.where(pole, 1.0, b)
        x = -1.0 / safe_b
        below = w * w * l1 * c1 <= 1.0
        x = np.where(pole, np.where(below, CLIP_OHMS, -CLIP_OHMS), x)
        return 1j * x
    z_c1 = -1j / (w * c1)
    if p[13] != 0.0:
        z_c1 = _parallel_arr(z_c1, np.full(w.shape, complex(r1, 0.0)))
    if p[12] != 0.0:
        z_c1 = z_c1 + (-1j / (w * c2))
    return _parallel_arr(1j * w * l1, z_c1)


def _thetas(f, p):
    scale = f / p[3]
    return p[1] * scale, p[2] * scale


def zin_grid(freqs, p):
    """Input impedance at the feed tap over a frequency grid, complex array."""
    f = np.asarray(freqs, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    w = 2.0 * np.pi * f
    th_o, th_s = _thetas(f, p)
    z_end = np.full(f.shape, complex(p[4], p[5]))
    z_open = _line_arr(p[0], th_o, z_end)
    z_arm = _clip_arr(_resonator_arr(w, p) + z_open)
    alpha = p[6]
    z_b = _line_arr(p[0], (1.0 - alpha) * th_s, z_arm)
    z_a = _clip_arr(1j * p[0] * np.tan(alpha * th_s))
    return _parallel_arr(z_a, z_b)


def residual_grid(freqs, p):
    """Series-resonance residual Z_LC - (Z_short - Z_open) over a grid."""
    f = np.asarray(freqs, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    w = 2.0 * np.pi * f
    th_o, th_s = _thetas(f, p)
    z_end = np.full(f.shape, complex(p[4], p[5]))
    z_open = _line_arr(p[0], th_o, z_end)
    z_short = _clip_arr(1j * p[0] * np.tan(th_s))
    return _resonator_arr(w, p) - (z_short - z_open)


def residual_im(f, p):
    """Scalar Im of the resonance residual at one frequency."""
    out = residual_grid(np.array([f], dtype=np.float64), p)
    return float(out[0].imag)
