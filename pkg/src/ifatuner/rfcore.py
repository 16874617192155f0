"""Complex-valued RF primitives: lumped elements, line transforms, varactor law.

Impedances are plain Python ``complex`` values in ohms. Lossless elements and
ideal open/short terminations produce genuine poles; instead of propagating
infinities, every primitive clips the result magnitude at ``CLIP_OHMS``
(1e9 ohm). Anything at or above the clip level is "effectively open", which
keeps downstream root finding and sweeps total.

All functions here are pure; there is no shared mutable state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

log = logging.getLogger(__name__)

# Library-wide pole clip for "effectively open" impedances, in ohms.
CLIP_OHMS = 1e9

# Canonical representation of an ideal open-circuit load.
OPEN_LOAD = complex(CLIP_OHMS, 0.0)


def clip_impedance(z: complex) -> complex:
    """Limit |z| to CLIP_OHMS, preserving phase. NaN/inf collapse to the clip level."""
    mag = abs(z)
    if mag > CLIP_OHMS:
        if math.isinf(mag) or math.isnan(mag):
            return OPEN_LOAD
        return z * (CLIP_OHMS / mag)
    if math.isnan(z.real) or math.isnan(z.imag):
        return OPEN_LOAD
    return z


def is_open(z: complex) -> bool:
    """True if z sits at the clip level, i.e. represents an open circuit."""
    return abs(z) >= CLIP_OHMS


def parallel(za: complex, zb: complex) -> complex:
    """Parallel combination za*zb/(za+zb), clip-aware at both ends."""
    if is_open(za):
        return clip_impedance(zb)
    if is_open(zb):
        return clip_impedance(za)
    den = za + zb
    if den == 0:
        return OPEN_LOAD
    return clip_impedance(za * zb / den)


@dataclass(frozen=True)
class VaractorModel:
    """Voltage-tuned capacitor: c_max at zero bias, c_max/tuning_ratio at v_max.

    Between the endpoints the capacitance follows a rational interpolation
    controlled by shape_exponent (1 = hyperbolic in |V|/v_max). Bias polarity
    is ignored: the film has no preferred field direction.
    """

    c_max: float
    tuning_ratio: float
    v_max: float
    shape_exponent: float = 1.0

    def __post_init__(self):
        if self.c_max <= 0:
            raise ValueError(f"c_max must be > 0, got {self.c_max}")
        if self.tuning_ratio < 1:
            raise ValueError(f"tuning_ratio must be >= 1, got {self.tuning_ratio}")
        if self.v_max <= 0:
            raise ValueError(f"v_max must be > 0, got {self.v_max}")
        if self.shape_exponent <= 0:
            raise ValueError(f"shape_exponent must be > 0, got {self.shape_exponent}")

    @property
    def c_min(self) -> float:
        return self.c_max / self.tuning_ratio


@dataclass(frozen=True)
class ResonatorNetwork:
    """Parallel LC resonator on the radiating arm, plus its bias network.

    l1/c1 set the resonance; c2 is the DC block and r1 the bias resistor.
    By default only l1 and c1 enter the RF path (the block capacitor barely
    shifts the resonance and the bias resistor is a weak shunt); the two
    include flags pull c2 (in series with c1) and r1 (shunting c1) back in
    for sensitivity studies.
    """

    l1: float
    c1: float
    c2: float = 68e-12
    r1: float = 10e3
    include_c2_in_rf: bool = False
    include_r1_in_rf: bool = False

    def __post_init__(self):
        for name in ("l1", "c1", "c2", "r1"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be finite and > 0, got {v}")

    @property
    def f0(self) -> float:
        """Self-resonant frequency of the bare l1/c1 pair, in Hz."""
        return 1.0 / (2.0 * math.pi * math.sqrt(self.l1 * self.c1))


def parallel_lc_impedance(l: float, c: float, f: float) -> complex:
    """Impedance of an ideal parallel LC at frequency f.

    Purely imaginary: inductive below the self-resonance, capacitive above,
    clipped to +/- j*CLIP_OHMS at the pole. The clip sign follows the
    below-resonance side when f lands exactly on the pole.
    """
    if l <= 0:
        raise ValueError(f"inductance must be > 0, got {l}")
    if c <= 0:
        raise ValueError(f"capacitance must be > 0, got {c}")
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    w = 2.0 * math.pi * f
    # susceptance of the pair; zero at the pole
    b = w * c - 1.0 / (w * l)
    if abs(b) < 1.0 / CLIP_OHMS:
        below = w * w * l * c <= 1.0
        return complex(0.0, CLIP_OHMS if below else -CLIP_OHMS)
    return complex(0.0, -1.0 / b)


def shorted_stub_impedance(z0: float, theta: float) -> complex:
    """Input impedance j*z0*tan(theta) of a shorted line section."""
    if z0 <= 0:
        raise ValueError(f"characteristic impedance must be > 0, got {z0}")
    t = math.tan(theta)
    return clip_impedance(complex(0.0, z0 * t))


def line_transform(z0: float, theta: float, z_load: complex) -> complex:
    """Transform z_load through a lossless line of electrical length theta.

    Uses the cos/sin form so quarter-wave sections stay exact; a load at the
    clip level is treated as a true open and reduces to -j*z0*cot(theta).
    """
    if z0 <= 0:
        raise ValueError(f"characteristic impedance must be > 0, got {z0}")
    if theta == 0.0:
        return z_load
    if is_open(z_load):
        s = math.sin(theta)
        if s == 0.0:
            return OPEN_LOAD
        return clip_impedance(complex(0.0, -z0 * math.cos(theta) / s))
    ct = math.cos(theta)
    st = math.sin(theta)
    den = z0 * ct + 1j * z_load * st
    if den == 0:
        return OPEN_LOAD
    return clip_impedance(z0 * (z_load * ct + 1j * z0 * st) / den)


def varactor_capacitance(model: VaractorModel, v: float) -> float:
    """Capacitance at DC bias v (volts), polarity-blind, clamped to [0, v_max]."""
    vv = abs(v)
    if vv > model.v_max:
        log.warning("bias %.3g V outside [0, %.3g] V, clamping", v, model.v_max)
        vv = model.v_max
    if vv == model.v_max:
        # exact endpoint, no rounding through the pow
        return model.c_max / model.tuning_ratio
    x = (vv / model.v_max) ** model.shape_exponent
    return model.c_max / (1.0 + (model.tuning_ratio - 1.0) * x)


def resonator_impedance(net: ResonatorNetwork, f: float) -> complex:
    """Series impedance the resonator presents to the arm at frequency f.

    Default is the bare parallel l1/c1 block. With the RF-inclusion flags,
    r1 shunts c1 and c2 sits in series with the (r1-shunted) c1 branch,
    mirroring the bias-network wiring.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    if not (net.include_c2_in_rf or net.include_r1_in_rf):
        return parallel_lc_impedance(net.l1, net.c1, f)
    w = 2.0 * math.pi * f
    z_c1: complex = complex(0.0, -1.0 / (w * net.c1))
    if net.include_r1_in_rf:
        z_c1 = parallel(z_c1, complex(net.r1, 0.0))
    if net.include_c2_in_rf:
        z_c1 = z_c1 + complex(0.0, -1.0 / (w * net.c2))
    z_l1 = complex(0.0, w * net.l1)
    return parallel(z_l1, z_c1)
