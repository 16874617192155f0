"""Band plans, -6 dB interval extraction, tuning unions, and coverage reports.

Frequencies are Hz throughout. Interval sets are kept normalized: sorted,
pairwise disjoint, with overlapping or touching members merged exactly (no
bridging tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .antmodel import DEFAULT_SWEEP_POINTS, AntennaGeometry, FrequencyProfile, sweep
from .errors import ConfigError
from .rfcore import ResonatorNetwork, VaractorModel, varactor_capacitance

DEFAULT_THRESHOLD_DB = -6.0

MHZ = 1e6


@dataclass(frozen=True)
class Interval:
    """Closed frequency interval [lo, hi] in Hz, with sweep-edge flags."""

    lo: float
    hi: float
    truncated_lo: bool = False
    truncated_hi: bool = False

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def truncated(self) -> bool:
        """True when the interval touches either sweep edge."""
        return self.truncated_lo or self.truncated_hi

    @property
    def width(self) -> float:
        """Interval width in Hz."""
        return self.hi - self.lo


def _merge(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort and merge overlapping or touching intervals, OR-ing edge flags."""
    pool = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
    merged: list[Interval] = []
    for iv in pool:
        if merged and iv.lo <= merged[-1].hi:
            last = merged[-1]
            merged[-1] = Interval(
                last.lo,
                max(last.hi, iv.hi),
                last.truncated_lo or iv.truncated_lo,
                last.truncated_hi or iv.truncated_hi,
            )
        else:
            merged.append(iv)
    return tuple(merged)


@dataclass(frozen=True)
class FrequencyIntervalSet:
    """Normalized set of disjoint, ascending intervals."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _merge(self.intervals))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def union(self, other: "FrequencyIntervalSet") -> "FrequencyIntervalSet":
        """Exact union of two sets."""
        return FrequencyIntervalSet(self.intervals + other.intervals)

    def contains(self, lo: float, hi: float) -> bool:
        """True when [lo, hi] lies inside a single member interval."""
        return any(iv.lo <= lo and hi <= iv.hi for iv in self.intervals)

    def subtract_from(self, lo: float, hi: float) -> tuple[tuple[float, float], ...]:
        """Parts of [lo, hi] not covered by this set, as (lo, hi) pairs."""
        gaps: list[tuple[float, float]] = []
        cursor = lo
        for iv in self.intervals:
            if iv.hi <= cursor:
                continue
            if iv.lo >= hi:
                break
            if iv.lo > cursor:
                gaps.append((cursor, min(iv.lo, hi)))
            cursor = max(cursor, iv.hi)
            if cursor >= hi:
                break
        if cursor < hi:
            gaps.append((cursor, hi))
        return tuple(g for g in gaps if g[1] > g[0])

    def measure(self) -> float:
        """Total covered width in Hz."""
        return sum(iv.width for iv in self.intervals)


@dataclass(frozen=True)
class BandSystem:
    """One named system with its allocated intervals in Hz."""

    name: str
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("system name must be non-empty")
        if not self.intervals:
            raise ValueError(f"system {self.name!r} needs at least one interval")
        for lo, hi in self.intervals:
            if not (0 < lo < hi):
                raise ValueError(f"system {self.name!r}: need 0 < lo < hi, got [{lo}, {hi}]")


@dataclass(frozen=True)
class BandPlan:
    """Named systems with frequency allocations; names are unique."""

    systems: tuple[BandSystem, ...]

    def __post_init__(self):
        names = [s.name for s in self.systems]
        if len(set(names)) != len(names):
            raise ValueError("system names must be unique")

    def lookup(self, name: str) -> tuple[tuple[float, float], ...]:
        """Intervals for a named system; KeyError if absent."""
        for s in self.systems:
            if s.name == name:
                return s.intervals
        raise KeyError(name)

    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.systems)


@dataclass(frozen=True)
class SystemCoverage:
    """Verdict for one system: covered, partial, or uncovered."""

    name: str
    verdict: str
    uncovered: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class CoverageReport:
    """Per-system verdicts plus the all-covered flag."""

    systems: tuple[SystemCoverage, ...]
    overall: bool

    def verdict(self, name: str) -> str:
        for s in self.systems:
            if s.name == name:
                return s.verdict
        raise KeyError(name)


def builtin_bandplan() -> BandPlan:
    """Six-system default plan (uplink + downlink allocations, Hz)."""
    raw = (
        ("GSM-850", ((824, 849), (869, 894))),
        ("GSM-900", ((890, 915), (935, 960))),
        ("GPS", ((1574.397, 1576.443),)),
        ("DCS", ((1710, 1785), (1805, 1880))),
        ("PCS", ((1850, 1910), (1930, 1990))),
        ("UMTS", ((1900, 1980), (2010, 2025), (2110, 2170))),
    )
    systems = tuple(
        BandSystem(name, tuple((lo * MHZ, hi * MHZ) for lo, hi in ivs)) for name, ivs in raw
    )
    return BandPlan(systems)


def load_band_plan(path: str) -> BandPlan:
    """Read a band plan from text: one `NAME = lo-hi, lo-hi` line per system, MHz.

    Blank lines and text after `#` are ignored.
    """
    systems: list[BandSystem] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read band plan {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected `NAME = lo-hi, ...`, got {text!r}")
        name, _, spec_part = text.partition("=")
        name = name.strip()
        intervals: list[tuple[float, float]] = []
        for piece in spec_part.split(","):
            piece = piece.strip()
            if not piece:
                continue
            lo_s, sep, hi_s = piece.partition("-")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: interval {piece!r} is not `lo-hi`")
            try:
                lo, hi = float(lo_s) * MHZ, float(hi_s) * MHZ
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad number in {piece!r}") from exc
            intervals.append((lo, hi))
        try:
            systems.append(BandSystem(name, tuple(intervals)))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    try:
        return BandPlan(tuple(systems))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def extract_bands(
    profile: FrequencyProfile, threshold_db: float = DEFAULT_THRESHOLD_DB
) -> FrequencyIntervalSet:
    """Intervals where s11_db <= threshold_db, edges by linear interpolation.

    Intervals that touch the first or last sweep sample carry truncated flags.
    """
    if threshold_db >= 0:
        raise ValueError(f"threshold_db must be < 0, got {threshold_db}")
    f = profile.freqs
    s = profile.s11_db
    below = s <= threshold_db
    if not below.any():
        return FrequencyIntervalSet()
    intervals: list[Interval] = []
    i = 0
    n = len(f)
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        if i == 0:
            lo, tlo = float(f[0]), True
        else:
            lo, tlo = _cross(f[i - 1], f[i], s[i - 1], s[i], threshold_db), False
        if j == n - 1:
            hi, thi = float(f[n - 1]), True
        else:
            hi, thi = _cross(f[j], f[j + 1], s[j], s[j + 1], threshold_db), False
        if hi > lo:
            intervals.append(Interval(lo, hi, tlo, thi))
        i = j + 1
    return FrequencyIntervalSet(tuple(intervals))


def _cross(fa: float, fb: float, sa: float, sb: float, thr: float) -> float:
    """Linear-interpolated frequency where s11 crosses thr between two samples."""
    if sb == sa:
        return float(fa)
    return float(fa + (thr - sa) * (fb - fa) / (sb - sa))


def tuning_union(band_sets: Sequence[FrequencyIntervalSet]) -> FrequencyIntervalSet:
    """Exact union over per-voltage interval sets."""
    if not band_sets:
        raise ValueError("need at least one interval set")
    out = FrequencyIntervalSet()
    for bs in band_sets:
        out = out.union(bs)
    return out


def coverage_report(union: FrequencyIntervalSet, plan: BandPlan) -> CoverageReport:
    """Verdict per system: covered, partial (with remainders), or uncovered."""
    verdicts: list[SystemCoverage] = []
    for system in plan.systems:
        gaps: list[tuple[float, float]] = []
        touched = False
        for lo, hi in system.intervals:
            rem = union.subtract_from(lo, hi)
            gaps.extend(rem)
            covered_width = (hi - lo) - sum(b - a for a, b in rem)
            if covered_width > 0:
                touched = True
        if not gaps:
            verdicts.append(SystemCoverage(system.name, "covered"))
        elif touched:
            verdicts.append(SystemCoverage(system.name, "partial", tuple(gaps)))
        else:
            verdicts.append(SystemCoverage(system.name, "uncovered", tuple(gaps)))
    overall = all(v.verdict == "covered" for v in verdicts)
    return CoverageReport(tuple(verdicts), overall)


def tuning_sweep(
    geom: AntennaGeometry,
    net_template: ResonatorNetwork,
    varactor: VaractorModel,
    voltages: Sequence[float],
    f_range: tuple[float, float],
    threshold_db: float = DEFAULT_THRESHOLD_DB,
    n_points: int = DEFAULT_SWEEP_POINTS,
    plan: BandPlan | None = None,
) -> tuple[list[FrequencyIntervalSet], FrequencyIntervalSet, CoverageReport]:
    """Sweep each bias voltage, extract bands, union them, and report coverage.

    Returns (per-voltage band sets in input order, union, coverage report).
    """
    if not voltages:
        raise ValueError("need at least one bias voltage")
    f_lo, f_hi = f_range
    per_voltage: list[FrequencyIntervalSet] = []
    for v in voltages:
        c1 = varactor_capacitance(varactor, float(v))
        net = replace(net_template, c1=c1)
        profile = sweep(geom, net, f_lo, f_hi, n_points)
        per_voltage.append(extract_bands(profile, threshold_db))
    union = tuning_union(per_voltage)
    report = coverage_report(union, plan if plan is not None else builtin_bandplan())
    return per_voltage, union, report
