"""Resonance finding, LC synthesis, and geometry calibration.

The series-resonance condition along the arm reads

    Z_LC(f) = Z_short(f) - Z_open(f)

and everything here is organized around its residual: roots of Im(residual)
are the antenna's resonances; synthesis inverts the condition for (L, C) at
two target frequencies; calibration adjusts the line geometry until the
model's roots land on measured band centers. A quarter-wave diagnostic maps
the resonator onto an equivalent electrical length via arctan(X/z0) and
checks that the total arm length defects from 90 degrees only slightly at
each resonance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.optimize

from . import antmodel, kernels, rfcore
from .antmodel import AntennaGeometry, pack_params
from .errors import ConvergenceError, InfeasibleTargetError
from .rfcore import ResonatorNetwork

log = logging.getLogger(__name__)

# Relative width of the zone around the resonator's own f0 excluded from
# root bracketing (the residual has a pole there, not a root).
POLE_EXCLUSION_REL = 1e-3

# A refined root is rejected when |Im(residual)| exceeds this many times z0:
# bisection onto the residual's pole converges to the clip level, orders of
# magnitude above any genuine root's residual.
ROOT_REJECT_Z0_MULTIPLE = 1.0

# Brackets whose endpoints BOTH exceed this |Im(residual)| are line-length
# poles (tan/cot blowing through the clip), never roots.
POLE_BRACKET_OHMS = 1e6

# Newton convergence: residuals below this multiple of z0.
SYNTH_TOL_Z0_MULTIPLE = 1e-6

# Targets whose required series impedance has |Re| above this multiple of z0
# are rejected as infeasible for a lossless LC.
REALITY_TOL_Z0_MULTIPLE = 0.1

# Closed form: relative imaginary residue tolerated on L and C before the
# real parts are taken. Loose by design: a lossy end load leaks a real
# component into the required impedance that the verbatim formula turns into
# a small imaginary residue on (L, C); the auto mode separately validates the
# outcome against the resonance residual.
CLOSED_FORM_REALITY_REL = 0.25

NEWTON_MAX_ITER = 200

BISECT_REL_TOL = 1e-9
BISECT_MAX_ITER = 200

CAL_F_REF = 1e9
CAL_BOX_1GHZ = {
    "theta_open_ref": (math.radians(10.0), math.radians(170.0)),
    "theta_short_ref": (math.radians(5.0), math.radians(90.0)),
    "feed_fraction": (0.05, 0.5),
    "z0": (40.0, 400.0),
}
CAL_STOP_OBJECTIVE = 1e-6
CAL_ACCEPT_OBJECTIVE = 1e-4
CAL_MAX_ITER = 500
CAL_MISSING_ROOT_PENALTY = 4.0


@dataclass(frozen=True)
class SynthesisResult:
    """LC pair realizing two target resonances.

    residual_f1/f2 hold the magnitude of the reactive (imaginary) mismatch of
    the resonance condition at each target; with a lossy end load the full
    complex residual additionally carries the load's real part, which no
    lossless LC can cancel.
    """

    l: float
    c: float
    method: str
    residual_f1: float
    residual_f2: float


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted geometry with the achieved objective and iteration count."""

    geometry: AntennaGeometry
    objective: float
    iterations: int
    converged: bool


def resonance_residual(geom: AntennaGeometry, net: ResonatorNetwork | None, f: float) -> complex:
    """Z_LC(f) - (Z_short(f) - Z_open(f)); zero (in Im) at a resonance."""
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    z_lc = antmodel.series_resonator_impedance(net, f)
    z_short = antmodel.impedance_toward_short(geom, f)
    z_open = antmodel.impedance_toward_open(geom, net, f)
    return z_lc - (z_short - z_open)


def _bisect_root(fa: float, fb: float, ra: float, rb: float, params: np.ndarray) -> float:
    """Refine a sign-change bracket of Im(residual) to 1e-9 relative width."""
    for _ in range(BISECT_MAX_ITER):
        fm = 0.5 * (fa + fb)
        if (fb - fa) <= BISECT_REL_TOL * fm:
            return fm
        rm = kernels.residual_im(fm, params)
        if rm == 0.0:
            return fm
        if (ra < 0.0) != (rm < 0.0):
            fb, rb = fm, rm
        else:
            fa, ra = fm, rm
    return 0.5 * (fa + fb)


def find_resonances(
    geom: AntennaGeometry,
    net: ResonatorNetwork | None,
    f_start: float,
    f_stop: float,
    n_grid: int = 2001,
) -> list[float]:
    """Roots of Im(residual) in [f_start, f_stop], sorted ascending.

    Grid-scan for sign changes, skipping points within 0.1% of the
    resonator's own f0 (a pole, not a root) and brackets whose endpoints both
    sit at pole magnitudes; each surviving bracket is refined by bisection.
    """
    if not 0 < f_start < f_stop:
        raise ValueError(f"need 0 < f_start < f_stop, got ({f_start}, {f_stop})")
    if n_grid < 16:
        raise ValueError(f"n_grid must be >= 16, got {n_grid}")
    grid = np.linspace(f_start, f_stop, n_grid)
    if net is not None:
        f0 = net.f0
        keep = np.abs(grid - f0) > POLE_EXCLUSION_REL * f0
        grid = grid[keep]
        if len(grid) < 2:
            return []
    params = pack_params(geom, net)
    im = kernels.residual_grid(grid, params).imag

    roots: list[float] = []
    reject = ROOT_REJECT_Z0_MULTIPLE * geom.z0
    for i in range(len(grid) - 1):
        ra, rb = im[i], im[i + 1]
        if ra == 0.0:
            if abs(ra) <= reject:
                roots.append(float(grid[i]))
            continue
        if (ra < 0.0) == (rb < 0.0):
            continue
        if min(abs(ra), abs(rb)) > POLE_BRACKET_OHMS:
            continue
        root = _bisect_root(float(grid[i]), float(grid[i + 1]), float(ra), float(rb), params)
        if abs(kernels.residual_im(root, params)) > reject:
            continue
        roots.append(root)
    if im[-1] == 0.0:
        roots.append(float(grid[-1]))

    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or (r - out[-1]) > 1e-8 * r:
            out.append(r)
    return out


def _required_impedances(geom: AntennaGeometry, f1: float, f2: float) -> tuple[complex, complex]:
    """Series impedance the resonator must present at each target frequency."""
    z1 = antmodel.impedance_toward_short(geom, f1) - antmodel.impedance_toward_open(geom, None, f1)
    z2 = antmodel.impedance_toward_short(geom, f2) - antmodel.impedance_toward_open(geom, None, f2)
    return z1, z2


def _check_feasible(
    geom: AntennaGeometry, f1: float, f2: float, z1: complex, z2: complex
) -> tuple[float, float]:
    """Validate the targets and return the exact reactance-matching (L, C).

    The two-reactance system is linear in (1/L, C), so its unique solution
    doubles as both the feasibility certificate and the numeric seed.
    """
    re_tol = REALITY_TOL_Z0_MULTIPLE * geom.z0
    for f, z in ((f1, z1), (f2, z2)):
        if abs(z.real) > re_tol:
            raise InfeasibleTargetError(
                f"required series impedance at {f:.6g} Hz has real part "
                f"{z.real:.4g} ohm (limit {re_tol:.4g}); a lossless LC cannot supply it"
            )
    x1, x2 = z1.imag, z2.imag
    w1, w2 = 2.0 * math.pi * f1, 2.0 * math.pi * f2
    if x1 == 0.0 or x2 == 0.0:
        raise InfeasibleTargetError(
            f"required reactance is exactly zero at {f1 if x1 == 0.0 else f2:.6g} Hz; "
            "a parallel LC only reaches zero reactance asymptotically"
        )
    c = (w1 / x1 - w2 / x2) / (w2 * w2 - w1 * w1)
    inv_l = w1 / x1 + w1 * w1 * c
    if c <= 0.0 or inv_l <= 0.0:
        raise InfeasibleTargetError(
            f"required reactances ({x1:.4g} ohm at {f1:.6g} Hz, {x2:.4g} ohm at "
            f"{f2:.6g} Hz) admit no positive (L, C); the resonator is inductive "
            "below its pole and capacitive above, so the lower target must not "
            "be more capacitive than the upper"
        )
    return 1.0 / inv_l, c


def _closed_form_lc(f1: float, z1: complex, z2: complex) -> tuple[complex, complex]:
    """Verbatim two-target closed form for (L, C), complex-valued."""
    w1 = 2.0 * math.pi * f1
    l = (-3j / (2.0 * w1)) * (z2 * z1) / (2.0 * z2 - z1)
    c = (-1j / w1) * (1.0 / z1 - 1.0 / (1j * w1 * l))
    return l, c


def _lc_reactance(l: float, c: float, w: float) -> float:
    return w * l / (1.0 - w * w * l * c)


def _newton_lc(
    f1: float, f2: float, x1: float, x2: float, seed: tuple[float, float], tol: float
) -> tuple[float, float]:
    """Damped Newton on (log L, log C) matching reactances at both targets."""
    w = np.array([2.0 * math.pi * f1, 2.0 * math.pi * f2])
    x_req = np.array([x1, x2])
    u = np.log(np.array(seed, dtype=np.float64))

    def residuals(u_vec: np.ndarray) -> np.ndarray:
        l, c = np.exp(u_vec)
        den = 1.0 - w * w * l * c
        den = np.where(np.abs(den) < 1e-300, 1e-300, den)
        return w * l / den - x_req

    g = residuals(u)
    for _ in range(NEWTON_MAX_ITER):
        if np.max(np.abs(g)) < tol:
            l, c = np.exp(u)
            return float(l), float(c)
        l, c = np.exp(u)
        den = 1.0 - w * w * l * c
        den = np.where(np.abs(den) < 1e-300, 1e-300, den)
        d_dl = w / (den * den)
        d_dc = (w ** 3) * l * l / (den * den)
        jac = np.column_stack([d_dl * l, d_dc * c])  # d/d(log L), d/d(log C)
        try:
            step = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular Jacobian in LC synthesis") from None
        # cap the log-space step, then halve until the residual improves
        norm = np.max(np.abs(step))
        if norm > 2.0:
            step = step * (2.0 / norm)
        lam = 1.0
        g_norm = np.linalg.norm(g)
        while lam > 1e-8:
            u_new = u + lam * step
            g_new = residuals(u_new)
            if np.linalg.norm(g_new) < g_norm:
                break
            lam *= 0.5
        else:
            raise ConvergenceError(
                "LC synthesis stalled: no damping step reduces the residual"
            )
        u, g = u_new, g_new
    raise ConvergenceError(
        f"LC synthesis did not converge in {NEWTON_MAX_ITER} iterations"
    )


def synthesize_lc(
    geom: AntennaGeometry, f1: float, f2: float, mode: str = "auto"
) -> SynthesisResult:
    """Solve for the resonator (L, C) that places resonances at f1 and f2.

    closed_form evaluates the verbatim two-target expressions; numeric runs a
    damped Newton match of the required reactances; auto validates the closed
    form through the resonance residual and falls back to numeric.
    """
    if not 0 < f1 < f2:
        raise ValueError(f"need 0 < f1 < f2, got ({f1}, {f2})")
    if mode not in ("closed_form", "numeric", "auto"):
        raise ValueError(f"mode must be closed_form|numeric|auto, got {mode!r}")
    z1, z2 = _required_impedances(geom, f1, f2)
    lc_exact = _check_feasible(geom, f1, f2, z1, z2)
    tol = SYNTH_TOL_Z0_MULTIPLE * geom.z0

    lc_cf: tuple[float, float] | None = None
    lc_complex = _closed_form_lc(f1, z1, z2)
    l_re, c_re = lc_complex[0].real, lc_complex[1].real
    cf_clean = (
        l_re > 0.0
        and c_re > 0.0
        and abs(lc_complex[0].imag) <= CLOSED_FORM_REALITY_REL * abs(l_re)
        and abs(lc_complex[1].imag) <= CLOSED_FORM_REALITY_REL * abs(c_re)
    )
    if cf_clean:
        lc_cf = (l_re, c_re)

    def finish(l: float, c: float, method: str) -> SynthesisResult:
        if not (l > 0.0 and c > 0.0 and math.isfinite(l) and math.isfinite(c)):
            raise InfeasibleTargetError(
                f"synthesis produced non-physical values L={l:.4g} H, C={c:.4g} F"
            )
        net = ResonatorNetwork(l1=l, c1=c)
        r1 = abs(resonance_residual(geom, net, f1).imag)
        r2 = abs(resonance_residual(geom, net, f2).imag)
        return SynthesisResult(l=l, c=c, method=method, residual_f1=r1, residual_f2=r2)

    if mode == "closed_form":
        if lc_cf is None:
            raise InfeasibleTargetError(
                "closed form produced no positive real (L, C) for these targets; "
                "use numeric or auto mode"
            )
        return finish(*lc_cf, "closed_form")

    if mode == "auto" and lc_cf is not None:
        result = finish(*lc_cf, "closed_form")
        if result.residual_f1 < tol and result.residual_f2 < tol:
            return result

    l, c = _newton_lc(f1, f2, z1.imag, z2.imag, lc_exact, tol)
    return finish(l, c, "numeric")


def effective_electrical_length(net: ResonatorNetwork | None, f: float, z0: float) -> float:
    """Equivalent line length of the resonator: arctan(X_LC/z0), radians.

    Positive below the resonator's f0 (inductive), negative above. Exactly at
    f0 the clipped pole keeps the value just under +pi/2, the below-side
    limit.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    if z0 <= 0:
        raise ValueError(f"z0 must be > 0, got {z0}")
    x = antmodel.series_resonator_impedance(net, f).imag
    return math.atan2(x, z0)


def quarter_wave_residual(geom: AntennaGeometry, net: ResonatorNetwork | None, f: float) -> float:
    """Defect of the quarter-wave condition at f, radians.

    theta_open(f) + theta_short(f) + arctan(X_LC/z0) - pi/2; small magnitude
    at a genuine resonance indicates the equivalent-length picture and the
    impedance condition agree.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    total = (
        geom.theta_open(f)
        + geom.theta_short(f)
        + effective_electrical_length(net, f, geom.z0)
    )
    return total - 0.5 * math.pi


def _cal_bounds(release_z0: bool, f_ref: float) -> list[tuple[float, float]]:
    scale = f_ref / CAL_F_REF
    bounds = [
        (CAL_BOX_1GHZ["theta_open_ref"][0] * scale, CAL_BOX_1GHZ["theta_open_ref"][1] * scale),
        (CAL_BOX_1GHZ["theta_short_ref"][0] * scale, CAL_BOX_1GHZ["theta_short_ref"][1] * scale),
        CAL_BOX_1GHZ["feed_fraction"],
    ]
    if release_z0:
        bounds.append(CAL_BOX_1GHZ["z0"])
    return bounds


def _clip_to_bounds(x: np.ndarray, bounds: list[tuple[float, float]]) -> np.ndarray:
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return np.clip(x, lo, hi)


def calibrate(
    geom0: AntennaGeometry,
    net: ResonatorNetwork,
    measured: tuple[float, float],
    release_z0: bool = False,
    f_scan: tuple[float, float] | None = None,
    n_grid: int = 601,
) -> CalibrationResult:
    """Fit line lengths and tap position so model resonances hit measured ones.

    Direct-search (Nelder-Mead) over (theta_open_ref, theta_short_ref,
    feed_fraction), plus z0 when release_z0 is set; z0 stays at its initial
    value otherwise. The objective is the sum of squared relative errors of
    the two predicted resonances against the measured pair; candidates that
    predict fewer than two resonances incur a fixed penalty plus the deficit.
    Deterministic: fixed initial simplex, fixed iteration cap.
    """
    f1, f2 = measured
    if not 0 < f1 < f2:
        raise ValueError(f"measured frequencies must be ascending positive, got {measured}")
    if f_scan is None:
        f_scan = (0.5 * f1, 1.5 * f2)
    bounds = _cal_bounds(release_z0, geom0.f_ref)

    def build(x: np.ndarray) -> AntennaGeometry:
        kwargs = {
            "theta_open_ref": float(x[0]),
            "theta_short_ref": float(x[1]),
            "feed_fraction": float(x[2]),
        }
        if release_z0:
            kwargs["z0"] = float(x[3])
        return replace(geom0, **kwargs)

    def objective(x: np.ndarray) -> float:
        xc = _clip_to_bounds(np.asarray(x, dtype=np.float64), bounds)
        g = build(xc)
        roots = find_resonances(g, net, f_scan[0], f_scan[1], n_grid)
        if len(roots) < 2:
            return CAL_MISSING_ROOT_PENALTY + (2 - len(roots))
        arr = np.asarray(roots)
        i_lo = int(np.argmin(np.abs(arr - f1)))
        r_lo = arr[i_lo]
        rest = np.delete(arr, i_lo)
        r_hi = rest[int(np.argmin(np.abs(rest - f2)))]
        return float(((r_lo - f1) / f1) ** 2 + ((r_hi - f2) / f2) ** 2)

    x0 = [geom0.theta_open_ref, geom0.theta_short_ref, geom0.feed_fraction]
    if release_z0:
        x0.append(geom0.z0)
    x0 = _clip_to_bounds(np.asarray(x0, dtype=np.float64), bounds)

    best = {"x": x0.copy(), "f": math.inf, "nit": 0}

    def tracked(x: np.ndarray) -> float:
        val = objective(x)
        if val < best["f"]:
            best["f"] = val
            best["x"] = _clip_to_bounds(np.asarray(x, dtype=np.float64), bounds)
        return val

    f0_obj = tracked(x0)

    # fixed initial simplex: +5% of each box width, reflected inward at the rim
    n = len(x0)
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        lo, hi = bounds[i]
        step = 0.05 * (hi - lo)
        moved = x0[i] + step if x0[i] + step <= hi else x0[i] - step
        simplex[i + 1, i] = moved

    class _EarlyStop(Exception):
        pass

    def callback(xk: np.ndarray) -> None:
        best["nit"] += 1
        if best["f"] < CAL_STOP_OBJECTIVE:
            raise _EarlyStop

    try:
        res = scipy.optimize.minimize(
            tracked,
            x0,
            method="Nelder-Mead",
            bounds=bounds,
            callback=callback,
            options={
                "initial_simplex": simplex,
                "maxiter": CAL_MAX_ITER,
                "xatol": 1e-10,
                "fatol": 1e-14,
            },
        )
        iterations = int(res.nit)
    except _EarlyStop:
        iterations = best["nit"]

    x_best = best["x"]
    obj_best = best["f"]
    if obj_best > f0_obj:
        x_best, obj_best = x0, f0_obj
        iterations = 0
    converged = obj_best < CAL_ACCEPT_OBJECTIVE
    if not converged:
        log.warning(
            "calibration did not reach objective < %.0e (best %.3e); returning best found",
            CAL_ACCEPT_OBJECTIVE,
            obj_best,
        )
    return CalibrationResult(
        geometry=build(x_best),
        objective=obj_best,
        iterations=iterations,
        converged=converged,
    )
