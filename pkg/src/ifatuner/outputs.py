"""Deterministic file emitters: sweep CSV, Touchstone .s1p, SVG plot, bands CSV.

Numbers are written in plain decimal with 9 significant digits, so re-parsed
values match in-memory values to better than 1 part in 1e8 and identical runs
produce byte-identical files. No writer emits timestamps.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .antmodel import FrequencyProfile
from .bandplan import FrequencyIntervalSet, Interval
from .errors import ConfigError

SWEEP_CSV_HEADER = "freq_hz,re_zin_ohm,im_zin_ohm,s11_db"
BANDS_CSV_HEADER = "voltage_v,band_lo_hz,band_hi_hz,truncated"
TOUCHSTONE_OPTION_LINE = "# Hz S RI R 50"

SVG_WIDTH = 800
SVG_HEIGHT = 500


def format_sig(x: float) -> str:
    """Plain-decimal string with 9 significant digits; -0 normalizes to 0."""
    text = np.format_float_positional(
        float(x), precision=9, unique=False, fractional=False, trim="-"
    )
    if text in ("-0", "-0."):
        return "0"
    return text


def sweep_csv_text(profile: FrequencyProfile) -> str:
    """CSV body for a sweep: header plus one row per grid point."""
    lines = [SWEEP_CSV_HEADER]
    for f, z, s in zip(profile.freqs, profile.z_in, profile.s11_db):
        lines.append(
            f"{format_sig(f)},{format_sig(z.real)},{format_sig(z.imag)},{format_sig(s)}"
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(profile: FrequencyProfile, path: str) -> None:
    """Write the sweep CSV to path."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_csv_text(profile))


def touchstone_text(profile: FrequencyProfile) -> str:
    """Single-port Touchstone v1 body: reflection coefficient, real/imag."""
    zr = profile.z_ref
    lines = [
        "! single-port reflection coefficient vs frequency",
        TOUCHSTONE_OPTION_LINE,
    ]
    for f, z in zip(profile.freqs, profile.z_in):
        gamma = (z - zr) / (z + zr)
        lines.append(f"{format_sig(f)} {format_sig(gamma.real)} {format_sig(gamma.imag)}")
    return "\n".join(lines) + "\n"


def write_touchstone(profile: FrequencyProfile, path: str) -> None:
    """Write the .s1p file to path."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(touchstone_text(profile))


def _svg_y_floor(s11_min: float) -> float:
    """Axis floor: the next multiple of 5 below the deepest sample, >= -40."""
    floor = 5.0 * np.floor(s11_min / 5.0)
    return float(max(floor, -40.0))


def svg_text(profile: FrequencyProfile, threshold_db: float = -6.0) -> str:
    """Static 800x500 line plot of s11_db vs frequency with a threshold rule."""
    margin_l, margin_r, margin_t, margin_b = 70, 20, 20, 55
    plot_w = SVG_WIDTH - margin_l - margin_r
    plot_h = SVG_HEIGHT - margin_t - margin_b
    f = profile.freqs
    s = profile.s11_db
    f_lo, f_hi = float(f[0]), float(f[-1])
    y_lo = _svg_y_floor(float(np.min(s)))
    y_hi = 0.0

    def xpix(freq: float) -> float:
        return margin_l + plot_w * (freq - f_lo) / (f_hi - f_lo)

    def ypix(db: float) -> float:
        db = min(max(db, y_lo), y_hi)
        return margin_t + plot_h * (y_hi - db) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    n_xticks = 8
    for i in range(n_xticks + 1):
        fx = f_lo + (f_hi - f_lo) * i / n_xticks
        px = xpix(fx)
        parts.append(
            f'<line x1="{px:.2f}" y1="{margin_t + plot_h}" x2="{px:.2f}" '
            f'y2="{margin_t + plot_h + 6}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{margin_t + plot_h + 22}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{fx / 1e9:.2f}</text>'
        )
    n_yticks = int(round((y_hi - y_lo) / 5.0))
    for i in range(n_yticks + 1):
        db = y_lo + 5.0 * i
        py = ypix(db)
        parts.append(
            f'<line x1="{margin_l - 6}" y1="{py:.2f}" x2="{margin_l}" '
            f'y2="{py:.2f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{margin_l - 10}" y="{py + 4:.2f}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{db:.0f}</text>'
        )
    parts.append(
        f'<text x="{margin_l + plot_w / 2:.2f}" y="{SVG_HEIGHT - 12}" font-size="14" '
        'text-anchor="middle" font-family="sans-serif">frequency (GHz)</text>'
    )
    parts.append(
        f'<text x="18" y="{margin_t + plot_h / 2:.2f}" font-size="14" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 18 {margin_t + plot_h / 2:.2f})">'
        "S11 (dB)</text>"
    )
    if y_lo < threshold_db < y_hi:
        ty = ypix(threshold_db)
        parts.append(
            f'<line x1="{margin_l}" y1="{ty:.2f}" x2="{margin_l + plot_w}" y2="{ty:.2f}" '
            'stroke="red" stroke-width="1" stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{margin_l + plot_w - 4}" y="{ty - 5:.2f}" font-size="12" '
            f'text-anchor="end" fill="red" font-family="sans-serif">{threshold_db:g} dB</text>'
        )
    points = " ".join(f"{xpix(float(fi)):.2f},{ypix(float(si)):.2f}" for fi, si in zip(f, s))
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(profile: FrequencyProfile, path: str, threshold_db: float = -6.0) -> None:
    """Write the SVG plot to path."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg_text(profile, threshold_db))


def bands_csv_text(rows: Sequence[tuple[float, FrequencyIntervalSet]]) -> str:
    """CSV body for per-voltage bands: one row per interval."""
    lines = [BANDS_CSV_HEADER]
    for voltage, bands in rows:
        for iv in bands:
            flag = "1" if iv.truncated else "0"
            lines.append(
                f"{format_sig(voltage)},{format_sig(iv.lo)},{format_sig(iv.hi)},{flag}"
            )
    return "\n".join(lines) + "\n"


def write_bands_csv(rows: Sequence[tuple[float, FrequencyIntervalSet]], path: str) -> None:
    """Write the per-voltage bands CSV to path."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(bands_csv_text(rows))


def read_bands_csv(path: str) -> list[tuple[float, FrequencyIntervalSet]]:
    """Read a bands CSV back into per-voltage interval sets.

    Voltages keep first-appearance order. The truncated flag does not record
    which edge was clipped; it is restored on the low edge.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise ConfigError(f"cannot read bands CSV {path!r}: {exc}") from exc
    if not lines or lines[0].strip() != BANDS_CSV_HEADER:
        raise ConfigError(f"{path}: expected header {BANDS_CSV_HEADER!r}")
    order: list[float] = []
    grouped: dict[float, list[Interval]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 4:
            raise ConfigError(f"{path}:{lineno}: expected 4 columns, got {len(cells)}")
        try:
            voltage = float(cells[0])
            lo = float(cells[1])
            hi = float(cells[2])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number in {line!r}") from exc
        flag_raw = cells[3].lower()
        if flag_raw in ("1", "true"):
            truncated = True
        elif flag_raw in ("0", "false"):
            truncated = False
        else:
            raise ConfigError(f"{path}:{lineno}: truncated must be 0 or 1, got {cells[3]!r}")
        if voltage not in grouped:
            order.append(voltage)
            grouped[voltage] = []
        try:
            grouped[voltage].append(Interval(lo, hi, truncated_lo=truncated))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return [(v, FrequencyIntervalSet(tuple(grouped[v]))) for v in order]


def iter_band_rows(
    voltages: Iterable[float], band_sets: Iterable[FrequencyIntervalSet]
) -> list[tuple[float, FrequencyIntervalSet]]:
    """Pair voltages with their band sets for the CSV writer."""
    return list(zip(voltages, band_sets))
