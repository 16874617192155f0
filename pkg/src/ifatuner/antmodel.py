"""Transmission-line model of an IFA with a series resonator in the arm.

The arm is two lossless lines of characteristic impedance z0 joined at the
resonator: one runs to the shorted end, the other to the open end, which is
terminated by the load z_end ("open" for an ideal open circuit). Electrical
lengths are stated at f_ref and scale linearly with frequency. The feed taps
the short-side line at feed_fraction of its length from the short.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rfcore
from .rfcore import CLIP_OHMS, OPEN_LOAD, ResonatorNetwork

log = logging.getLogger(__name__)

DEFAULT_SWEEP_POINTS = 2001
DEFAULT_Z_REF = 50.0

# S11 floor for the perfectly matched case, in dB.
S11_FLOOR_DB = -200.0


@dataclass(frozen=True)
class AntennaGeometry:
    """Arm geometry: line impedance, electrical lengths at f_ref, end load, tap.

    z_end accepts the string "open" or a complex impedance; it is stored as a
    complex value with ideal opens at the clip level. feed_fraction 0 puts the
    feed at the short, 1 at the resonator.
    """

    z0: float
    theta_open_ref: float
    theta_short_ref: float
    f_ref: float
    z_end: complex = OPEN_LOAD
    feed_fraction: float = 0.15

    def __post_init__(self):
        if self.z0 <= 0:
            raise ValueError(f"z0 must be > 0, got {self.z0}")
        if self.theta_open_ref <= 0:
            raise ValueError(f"theta_open_ref must be > 0, got {self.theta_open_ref}")
        if self.theta_short_ref <= 0:
            raise ValueError(f"theta_short_ref must be > 0, got {self.theta_short_ref}")
        if self.f_ref <= 0:
            raise ValueError(f"f_ref must be > 0, got {self.f_ref}")
        if not 0.0 <= self.feed_fraction <= 1.0:
            raise ValueError(f"feed_fraction must be in [0, 1], got {self.feed_fraction}")
        z = self.z_end
        if isinstance(z, str):
            if z.lower() != "open":
                raise ValueError(f'z_end must be a complex impedance or "open", got {z!r}')
            z = OPEN_LOAD
        else:
            z = complex(z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"z_end must be finite, got {z}")
            z = rfcore.clip_impedance(z)
        object.__setattr__(self, "z_end", z)

    @property
    def is_open_ended(self) -> bool:
        return rfcore.is_open(self.z_end)

    def theta_open(self, f: float) -> float:
        """Open-side electrical length at frequency f, radians."""
        return self.theta_open_ref * f / self.f_ref

    def theta_short(self, f: float) -> float:
        """Short-side electrical length at frequency f, radians."""
        return self.theta_short_ref * f / self.f_ref


@dataclass(frozen=True)
class FrequencyProfile:
    """Sampled sweep: strictly increasing freqs with z_in and s11_db per point."""

    freqs: np.ndarray
    z_in: np.ndarray
    s11_db: np.ndarray
    z_ref: float = DEFAULT_Z_REF

    def __post_init__(self):
        object.__setattr__(self, "freqs", np.asarray(self.freqs, dtype=np.float64))
        object.__setattr__(self, "z_in", np.asarray(self.z_in, dtype=np.complex128))
        object.__setattr__(self, "s11_db", np.asarray(self.s11_db, dtype=np.float64))
        n = len(self.freqs)
        if len(self.z_in) != n or len(self.s11_db) != n:
            raise ValueError("freqs, z_in, s11_db must have equal length")
        if n >= 2 and not np.all(np.diff(self.freqs) > 0):
            raise ValueError("freqs must be strictly increasing")
        if self.z_ref <= 0:
            raise ValueError(f"z_ref must be > 0, got {self.z_ref}")
        if np.any(self.s11_db > 0):
            raise ValueError("s11_db must be <= 0 everywhere")

    def __len__(self) -> int:
        return len(self.freqs)


def pack_params(geom: AntennaGeometry, net: ResonatorNetwork | None) -> np.ndarray:
    """Flatten geometry + resonator into the kernels' parameter vector."""
    p = np.zeros(kernels.N_PARAMS, dtype=np.float64)
    p[0] = geom.z0
    p[1] = geom.theta_open_ref
    p[2] = geom.theta_short_ref
    p[3] = geom.f_ref
    p[4] = geom.z_end.real
    p[5] = geom.z_end.imag
    p[6] = geom.feed_fraction
    if net is not None:
        p[7] = 1.0
        p[8] = net.l1
        p[9] = net.c1
        p[10] = net.c2
        p[11] = net.r1
        p[12] = 1.0 if net.include_c2_in_rf else 0.0
        p[13] = 1.0 if net.include_r1_in_rf else 0.0
    else:
        p[8] = 1.0
        p[9] = 1.0
        p[10] = 1.0
        p[11] = 1.0
    return p


def series_resonator_impedance(net: ResonatorNetwork | None, f: float) -> complex:
    """Z_LC the arm sees in series; a missing resonator is a through-connection."""
    if net is None:
        return 0j
    return rfcore.resonator_impedance(net, f)


def impedance_toward_open(geom: AntennaGeometry, net: ResonatorNetwork | None, f: float) -> complex:
    """Impedance seen from the resonator toward the open end (resonator excluded)."""
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    return rfcore.line_transform(geom.z0, geom.theta_open(f), geom.z_end)


def impedance_toward_short(geom: AntennaGeometry, f: float) -> complex:
    """Impedance seen from the resonator toward the shorted end."""
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    return rfcore.shorted_stub_impedance(geom.z0, geom.theta_short(f))


def input_impedance(geom: AntennaGeometry, net: ResonatorNetwork | None, f: float) -> complex:
    """Impedance at the feed tap.

    The short-side line splits at the tap: toward the short it is a shorted
    stub of length feed_fraction*theta_short(f); toward the open end the
    series resonator plus the transformed open-side load come back through
    the remaining (1 - feed_fraction) of the line. The two are in parallel.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    th_s = geom.theta_short(f)
    alpha = geom.feed_fraction
    z_open = impedance_toward_open(geom, net, f)
    z_arm = rfcore.clip_impedance(series_resonator_impedance(net, f) + z_open)
    z_b = rfcore.line_transform(geom.z0, (1.0 - alpha) * th_s, z_arm)
    z_a = rfcore.shorted_stub_impedance(geom.z0, alpha * th_s)
    return rfcore.parallel(z_a, z_b)


def return_loss(z_in: complex, z_ref: float = DEFAULT_Z_REF) -> float:
    """S11 in dB of z_in against a real reference, floored at -200 dB."""
    if z_ref <= 0:
        raise ValueError(f"z_ref must be > 0, got {z_ref}")
    den = z_in + z_ref
    if den == 0:
        # passive model cannot exceed total reflection
        log.warning("z_in equals -z_ref exactly; reporting 0 dB total reflection")
        return 0.0
    gamma = abs((z_in - z_ref) / den)
    if gamma <= 10.0 ** (S11_FLOOR_DB / 20.0):
        return S11_FLOOR_DB
    return min(20.0 * math.log10(gamma), 0.0)


def sweep(
    geom: AntennaGeometry,
    net: ResonatorNetwork | None,
    f_start: float,
    f_stop: float,
    n_points: int = DEFAULT_SWEEP_POINTS,
    z_ref: float = DEFAULT_Z_REF,
) -> FrequencyProfile:
    """Linear-grid impedance and return-loss sweep at the feed tap."""
    if not 0 < f_start < f_stop:
        raise ValueError(f"need 0 < f_start < f_stop, got ({f_start}, {f_stop})")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    if z_ref <= 0:
        raise ValueError(f"z_ref must be > 0, got {z_ref}")
    freqs = np.linspace(f_start, f_stop, n_points)
    z_in = kernels.zin_grid(freqs, pack_params(geom, net))
    s11 = return_loss_grid(z_in, z_ref)
    return FrequencyProfile(freqs=freqs, z_in=z_in, s11_db=s11, z_ref=z_ref)


def return_loss_grid(z_in: np.ndarray, z_ref: float = DEFAULT_Z_REF) -> np.ndarray:
    """Vectorized return_loss over an impedance array."""
    if z_ref <= 0:
        raise ValueError(f"z_ref must be > 0, got {z_ref}")
    z_in = np.asarray(z_in, dtype=np.complex128)
    den = z_in + z_ref
    zero = den == 0
    safe_den = np.where(zero, 1.0, den)
    gamma = np.abs((z_in - z_ref) / safe_den)
    floor_gamma = 10.0 ** (S11_FLOOR_DB / 20.0)
    db = 20.0 * np.log10(np.maximum(gamma, floor_gamma))
    db = np.minimum(db, 0.0)
    db = np.where(zero, 0.0, db)
    if zero.any():
        log.warning("z_in equals -z_ref exactly at %d points; reporting 0 dB", int(zero.sum()))
    return np.maximum(db, S11_FLOOR_DB)
