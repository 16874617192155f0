"""Flat dotted-key run configuration: parse, validate, default, and write.

Config files are human-editable text: one `section.key = value` per line,
`#` starts a comment. Human-facing units (degrees, nH, pF, MHz-free Hz keys)
live in the file; dataclasses carry SI units and radians. Unknown keys are
rejected by name. A partial file inherits defaults for missing keys.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .antmodel import AntennaGeometry
from .errors import ConfigError
from .rfcore import ResonatorNetwork, VaractorModel, is_open

NH = 1e-9
PF = 1e-12

# Canonical key order; also the complete set of legal keys.
_DEFAULT_ITEMS: tuple[tuple[str, str], ...] = (
    ("geometry.z0_ohm", "243.72"),
    ("geometry.theta_open_deg", "68.8388480074"),
    ("geometry.theta_short_deg", "6.4468079228"),
    ("geometry.f_ref_hz", "1e9"),
    ("geometry.z_end_ohm", "6.68-931.7j"),
    ("geometry.feed_fraction", "0.2"),
    ("resonator.l1_nh", "9.1"),
    ("resonator.c1_pf", "2.0"),
    ("resonator.c2_pf", "68.0"),
    ("resonator.r1_ohm", "10000.0"),
    ("resonator.include_c2_in_rf", "false"),
    ("resonator.include_r1_in_rf", "false"),
    ("varactor.c_max_pf", "2.0"),
    ("varactor.tuning_ratio", "3.3"),
    ("varactor.v_max_v", "15.0"),
    ("varactor.shape_exponent", "1.0"),
    ("sweep.f_start_hz", "0.7e9"),
    ("sweep.f_stop_hz", "2.3e9"),
    ("sweep.n_points", "2001"),
    ("bands.threshold_db", "-6.0"),
    ("bands.voltages_v", "0, 15"),
    ("output.dir", "."),
)

KNOWN_KEYS = tuple(k for k, _ in _DEFAULT_ITEMS)


@dataclass(frozen=True)
class RunConfig:
    """Validated run setup: model objects plus sweep and banding controls."""

    geometry: AntennaGeometry
    resonator: ResonatorNetwork
    varactor: VaractorModel
    f_start: float
    f_stop: float
    n_points: int
    threshold_db: float
    voltages: tuple[float, ...]
    out_dir: str = "."

    def __post_init__(self):
        if not (0 < self.f_start < self.f_stop):
            raise ConfigError(
                f"need 0 < sweep.f_start_hz < sweep.f_stop_hz, got ({self.f_start}, {self.f_stop})"
            )
        if self.n_points < 2:
            raise ConfigError(f"sweep.n_points must be >= 2, got {self.n_points}")
        if self.threshold_db >= 0:
            raise ConfigError(f"bands.threshold_db must be < 0, got {self.threshold_db}")
        if not self.voltages:
            raise ConfigError("bands.voltages_v must list at least one voltage")


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc


def _parse_z_end(key: str, raw: str):
    text = raw.strip()
    if text.lower() == "open":
        return "open"
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f'{key}: expected "open" or a complex impedance, got {raw!r}') from exc


def _parse_voltages(key: str, raw: str) -> tuple[float, ...]:
    out = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        out.append(_parse_float(key, piece))
    if not out:
        raise ConfigError(f"{key}: expected a comma-separated voltage list, got {raw!r}")
    return tuple(out)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse flat `key = value` lines into a dict, rejecting unknown keys."""
    known = set(KNOWN_KEYS)
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected `key = value`, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate config key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        out[key] = value
    return out


def build_config(raw: dict[str, str]) -> RunConfig:
    """Construct a RunConfig from a complete flat string mapping."""
    try:
        return _build_config(raw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_config(raw: dict[str, str]) -> RunConfig:
    geometry = AntennaGeometry(
        z0=_parse_float("geometry.z0_ohm", raw["geometry.z0_ohm"]),
        theta_open_ref=math.radians(
            _parse_float("geometry.theta_open_deg", raw["geometry.theta_open_deg"])
        ),
        theta_short_ref=math.radians(
            _parse_float("geometry.theta_short_deg", raw["geometry.theta_short_deg"])
        ),
        f_ref=_parse_float("geometry.f_ref_hz", raw["geometry.f_ref_hz"]),
        z_end=_parse_z_end("geometry.z_end_ohm", raw["geometry.z_end_ohm"]),
        feed_fraction=_parse_float("geometry.feed_fraction", raw["geometry.feed_fraction"]),
    )
    resonator = ResonatorNetwork(
        l1=_parse_float("resonator.l1_nh", raw["resonator.l1_nh"]) * NH,
        c1=_parse_float("resonator.c1_pf", raw["resonator.c1_pf"]) * PF,
        c2=_parse_float("resonator.c2_pf", raw["resonator.c2_pf"]) * PF,
        r1=_parse_float("resonator.r1_ohm", raw["resonator.r1_ohm"]),
        include_c2_in_rf=_parse_bool(
            "resonator.include_c2_in_rf", raw["resonator.include_c2_in_rf"]
        ),
        include_r1_in_rf=_parse_bool(
            "resonator.include_r1_in_rf", raw["resonator.include_r1_in_rf"]
        ),
    )
    varactor = VaractorModel(
        c_max=_parse_float("varactor.c_max_pf", raw["varactor.c_max_pf"]) * PF,
        tuning_ratio=_parse_float("varactor.tuning_ratio", raw["varactor.tuning_ratio"]),
        v_max=_parse_float("varactor.v_max_v", raw["varactor.v_max_v"]),
        shape_exponent=_parse_float("varactor.shape_exponent", raw["varactor.shape_exponent"]),
    )
    return RunConfig(
        geometry=geometry,
        resonator=resonator,
        varactor=varactor,
        f_start=_parse_float("sweep.f_start_hz", raw["sweep.f_start_hz"]),
        f_stop=_parse_float("sweep.f_stop_hz", raw["sweep.f_stop_hz"]),
        n_points=_parse_int("sweep.n_points", raw["sweep.n_points"]),
        threshold_db=_parse_float("bands.threshold_db", raw["bands.threshold_db"]),
        voltages=_parse_voltages("bands.voltages_v", raw["bands.voltages_v"]),
        out_dir=raw["output.dir"],
    )


def default_config() -> RunConfig:
    """The shipped calibrated default setup."""
    return build_config(dict(_DEFAULT_ITEMS))


def load_config(path: str) -> RunConfig:
    """Read a config file; missing keys fall back to the shipped defaults."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    overrides = parse_config_text(text, source=path)
    merged = dict(_DEFAULT_ITEMS)
    merged.update(overrides)
    return build_config(merged)


def _format_float(x: float) -> str:
    """Shortest decimal that round-trips the float exactly."""
    return repr(float(x))


def config_to_items(cfg: RunConfig) -> tuple[tuple[str, str], ...]:
    """Flatten a RunConfig back to canonical (key, value) pairs."""
    g, r, v = cfg.geometry, cfg.resonator, cfg.varactor
    if is_open(g.z_end):
        z_end = "open"
    else:
        z_end = f"{_format_float(g.z_end.real)}{g.z_end.imag:+}j"
    return (
        ("geometry.z0_ohm", _format_float(g.z0)),
        ("geometry.theta_open_deg", _format_float(math.degrees(g.theta_open_ref))),
        ("geometry.theta_short_deg", _format_float(math.degrees(g.theta_short_ref))),
        ("geometry.f_ref_hz", _format_float(g.f_ref)),
        ("geometry.z_end_ohm", z_end),
        ("geometry.feed_fraction", _format_float(g.feed_fraction)),
        ("resonator.l1_nh", _format_float(r.l1 / NH)),
        ("resonator.c1_pf", _format_float(r.c1 / PF)),
        ("resonator.c2_pf", _format_float(r.c2 / PF)),
        ("resonator.r1_ohm", _format_float(r.r1)),
        ("resonator.include_c2_in_rf", "true" if r.include_c2_in_rf else "false"),
        ("resonator.include_r1_in_rf", "true" if r.include_r1_in_rf else "false"),
        ("varactor.c_max_pf", _format_float(v.c_max / PF)),
        ("varactor.tuning_ratio", _format_float(v.tuning_ratio)),
        ("varactor.v_max_v", _format_float(v.v_max)),
        ("varactor.shape_exponent", _format_float(v.shape_exponent)),
        ("sweep.f_start_hz", _format_float(cfg.f_start)),
        ("sweep.f_stop_hz", _format_float(cfg.f_stop)),
        ("sweep.n_points", str(cfg.n_points)),
        ("bands.threshold_db", _format_float(cfg.threshold_db)),
        ("bands.voltages_v", ", ".join(_format_float(x) for x in cfg.voltages)),
        ("output.dir", cfg.out_dir),
    )


def write_config(cfg: RunConfig, path: str, header: str | None = None) -> None:
    """Write a config file in canonical key order; deterministic output."""
    lines = []
    if header:
        for row in header.splitlines():
            lines.append(f"# {row}" if row else "#")
    lines.extend(f"{k} = {v}" for k, v in config_to_items(cfg))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
