"""Interval algebra, band extraction, tuning unions, and coverage tests."""

import numpy as np
import pytest

from ifatuner.antmodel import FrequencyProfile
from ifatuner.bandplan import (
    FrequencyIntervalSet,
    Interval,
    builtin_bandplan,
    coverage_report,
    extract_bands,
    load_band_plan,
    tuning_sweep,
    tuning_union,
)
from ifatuner.errors import ConfigError


def _profile(freqs_mhz, s11_db):
    """Synthetic sweep profile from MHz samples and dB values."""
    f = np.asarray(freqs_mhz, dtype=float) * 1e6
    s = np.asarray(s11_db, dtype=float)
    z = np.full(len(f), 50.0 + 0.0j)
    return FrequencyProfile(freqs=f, z_in=z, s11_db=s)


def _set(*pairs_mhz):
    """Interval set from (lo, hi) pairs in MHz."""
    return FrequencyIntervalSet(tuple(Interval(lo * 1e6, hi * 1e6) for lo, hi in pairs_mhz))


def _random_set(rng):
    ivs = []
    for _ in range(int(rng.integers(1, 5))):
        lo = float(rng.uniform(0.5e9, 2.4e9))
        ivs.append(Interval(lo, lo + float(rng.uniform(1e6, 3e8))))
    return FrequencyIntervalSet(tuple(ivs))


def test_interval_requires_ascending_edges():
    with pytest.raises(ValueError):
        Interval(2e9, 1e9)
    with pytest.raises(ValueError):
        Interval(1e9, 1e9)


def test_interval_width_and_truncated_flags():
    iv = Interval(1e9, 1.5e9)
    assert iv.width == 0.5e9
    assert not iv.truncated
    assert Interval(1e9, 1.5e9, truncated_lo=True).truncated
    assert Interval(1e9, 1.5e9, truncated_hi=True).truncated


def test_interval_set_merges_overlapping_and_touching():
    s = FrequencyIntervalSet(
        (
            Interval(1.0e9, 1.2e9),
            Interval(1.1e9, 1.4e9),
            Interval(1.4e9, 1.5e9),
            Interval(1.6e9, 1.7e9),
        )
    )
    assert [(iv.lo, iv.hi) for iv in s] == [(1.0e9, 1.5e9), (1.6e9, 1.7e9)]


def test_interval_set_merge_preserves_edge_flags():
    s = FrequencyIntervalSet(
        (
            Interval(1.0e9, 1.2e9, truncated_lo=True),
            Interval(1.1e9, 1.4e9, truncated_hi=True),
        )
    )
    (iv,) = s.intervals
    assert iv.truncated_lo and iv.truncated_hi


def test_interval_set_membership_and_measure():
    s = FrequencyIntervalSet((Interval(1.0e9, 1.5e9), Interval(2.0e9, 2.2e9)))
    assert s.contains(1.1e9, 1.4e9)
    assert not s.contains(1.4e9, 2.1e9)
    assert s.measure() == pytest.approx(0.7e9)
    assert len(s) == 2 and bool(s)
    assert not FrequencyIntervalSet()


def test_subtract_from_returns_exact_gaps():
    s = FrequencyIntervalSet((Interval(1.0e9, 1.2e9), Interval(1.5e9, 1.6e9)))
    gaps = s.subtract_from(0.9e9, 1.7e9)
    assert gaps == ((0.9e9, 1.0e9), (1.2e9, 1.5e9), (1.6e9, 1.7e9))
    assert s.subtract_from(1.05e9, 1.15e9) == ()


def test_extract_bands_interpolates_threshold_crossings():
    prof = _profile([880.0, 920.0, 940.0, 960.0], [0.0, -12.0, -12.0, 0.0])
    bands = extract_bands(prof, threshold_db=-6.0)
    (iv,) = bands.intervals
    assert iv.lo == pytest.approx(900e6)
    assert iv.hi == pytest.approx(950e6)
    assert not iv.truncated


def test_extract_bands_empty_when_never_below():
    prof = _profile([800.0, 900.0, 1000.0], [-1.0, -5.9, -2.0])
    assert not extract_bands(prof, -6.0)


def test_extract_bands_flags_sweep_edge_truncation():
    prof = _profile([800.0, 900.0, 1000.0], [-20.0, -25.0, -22.0])
    (iv,) = extract_bands(prof, -6.0).intervals
    assert iv.lo == 800e6 and iv.hi == 1000e6
    assert iv.truncated_lo and iv.truncated_hi


def test_extract_bands_left_edge_truncation_only():
    prof = _profile([800.0, 900.0, 1000.0], [-9.0, -6.0, 0.0])
    (iv,) = extract_bands(prof, -6.0).intervals
    assert iv.truncated_lo and not iv.truncated_hi
    assert iv.hi == pytest.approx(900e6)


def test_extract_bands_drops_zero_width_touch():
    prof = _profile([800.0, 900.0, 1000.0], [-3.0, -6.0, -3.0])
    assert not extract_bands(prof, -6.0)


def test_extract_bands_rejects_non_negative_threshold():
    prof = _profile([800.0, 900.0], [-10.0, -10.0])
    with pytest.raises(ValueError):
        extract_bands(prof, 0.0)


def test_extract_bands_threshold_controls_width():
    prof = _profile([800.0, 900.0, 1000.0], [0.0, -20.0, 0.0])
    wide = extract_bands(prof, -6.0)
    narrow = extract_bands(prof, -12.0)
    assert narrow.intervals[0].lo > wide.intervals[0].lo
    assert narrow.intervals[0].hi < wide.intervals[0].hi
    assert wide.contains(narrow.intervals[0].lo, narrow.intervals[0].hi)


def test_union_is_idempotent_commutative_associative():
    rng = np.random.default_rng(53)
    for _ in range(50):
        a, b, c = _random_set(rng), _random_set(rng), _random_set(rng)
        assert a.union(a) == a
        assert a.union(b) == b.union(a)
        assert a.union(b).union(c) == a.union(b.union(c))


def test_tuning_union_bridges_through_intermediate_bias():
    sets = [
        FrequencyIntervalSet((Interval(822e6, 866e6),)),
        FrequencyIntervalSet((Interval(860e6, 940e6),)),
        FrequencyIntervalSet((Interval(922e6, 1050e6),)),
    ]
    out = tuning_union(sets)
    assert [(iv.lo, iv.hi) for iv in out] == [(822e6, 1050e6)]


def test_tuning_union_keeps_disjoint_sets_apart():
    sets = [
        FrequencyIntervalSet((Interval(822e6, 866e6),)),
        FrequencyIntervalSet((Interval(922e6, 1050e6),)),
    ]
    out = tuning_union(sets)
    assert [(iv.lo, iv.hi) for iv in out] == [(822e6, 866e6), (922e6, 1050e6)]


def test_tuning_union_single_set_identity_and_empty_rejected():
    s = FrequencyIntervalSet((Interval(1e9, 1.1e9),))
    assert tuning_union([s]) == s
    with pytest.raises(ValueError):
        tuning_union([])


def test_coverage_full_union_covers_all_six_systems():
    report = coverage_report(_set((822, 1050), (1420, 2190)), builtin_bandplan())
    assert report.overall
    assert all(s.verdict == "covered" for s in report.systems)


def test_coverage_lower_band_only():
    report = coverage_report(_set((822, 1050)), builtin_bandplan())
    assert not report.overall
    assert report.verdict("GSM-850") == "covered"
    assert report.verdict("GSM-900") == "covered"
    for name in ("GPS", "DCS", "PCS", "UMTS"):
        assert report.verdict(name) == "uncovered"


def test_coverage_empty_union_is_all_uncovered():
    report = coverage_report(FrequencyIntervalSet(), builtin_bandplan())
    assert not report.overall
    assert all(s.verdict == "uncovered" for s in report.systems)
    gsm = next(s for s in report.systems if s.name == "GSM-850")
    assert gsm.uncovered == ((824e6, 849e6), (869e6, 894e6))


def test_coverage_partial_reports_exact_remainder():
    report = coverage_report(_set((824, 870)), builtin_bandplan())
    gsm = next(s for s in report.systems if s.name == "GSM-850")
    assert gsm.verdict == "partial"
    assert gsm.uncovered == ((870e6, 894e6),)


def test_coverage_never_degrades_as_union_grows():
    rank = {"uncovered": 0, "partial": 1, "covered": 2}
    plan = builtin_bandplan()
    rng = np.random.default_rng(54)
    for _ in range(30):
        a, b = _random_set(rng), _random_set(rng)
        before = coverage_report(a, plan)
        after = coverage_report(a.union(b), plan)
        for name in plan.names():
            assert rank[after.verdict(name)] >= rank[before.verdict(name)]


def test_builtin_plan_names_and_lookup():
    plan = builtin_bandplan()
    assert plan.names() == ("GSM-850", "GSM-900", "GPS", "DCS", "PCS", "UMTS")
    assert plan.lookup("GPS") == ((1574.397 * 1e6, 1576.443 * 1e6),)
    with pytest.raises(KeyError):
        plan.lookup("LTE")


def test_builtin_plan_spans_lie_inside_tuning_targets():
    plan = builtin_bandplan()
    lower = [f for n in ("GSM-850", "GSM-900") for iv in plan.lookup(n) for f in iv]
    upper = [f for n in ("GPS", "DCS", "PCS", "UMTS") for iv in plan.lookup(n) for f in iv]
    assert 822e6 <= min(lower) and max(lower) <= 1050e6
    assert 1420e6 <= min(upper) and max(upper) <= 2190e6


def test_load_band_plan_parses_mhz_lines(tmp_path):
    p = tmp_path / "plan.txt"
    p.write_text(
        "# example plan\n"
        "\n"
        "LOW = 800-900, 950-1000   # two sub-bands\n"
        "HIGH = 1700-1800\n",
        encoding="utf-8",
    )
    plan = load_band_plan(str(p))
    assert plan.names() == ("LOW", "HIGH")
    assert plan.lookup("LOW") == ((800e6, 900e6), (950e6, 1000e6))
    assert plan.lookup("HIGH") == ((1700e6, 1800e6),)


def test_load_band_plan_rejects_bad_lines(tmp_path):
    cases = [
        ("LOW 800-900\n", "expected"),
        ("LOW = 800:900\n", "not `lo-hi`"),
        ("LOW = eight-900\n", "bad number"),
        ("LOW = 900-800\n", "lo < hi"),
        ("A = 800-900\nA = 950-1000\n", "unique"),
    ]
    for text, fragment in cases:
        p = tmp_path / "bad.txt"
        p.write_text(text, encoding="utf-8")
        with pytest.raises(ConfigError, match=fragment):
            load_band_plan(str(p))


def test_load_band_plan_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_band_plan("/nonexistent/plan.txt")


def test_tuning_sweep_single_voltage_union_identity(geometry, resonator, varactor):
    per_v, union, report = tuning_sweep(geometry, resonator, varactor, [0.0], (0.7e9, 2.3e9))
    assert len(per_v) == 1
    assert union == per_v[0]
    assert len(per_v[0]) == 2
    assert report.overall is False


def test_tuning_sweep_band_edges_stable_under_grid_refinement(geometry, resonator, varactor):
    coarse, _, _ = tuning_sweep(
        geometry, resonator, varactor, [0.0], (0.7e9, 2.3e9), n_points=2001
    )
    fine, _, _ = tuning_sweep(geometry, resonator, varactor, [0.0], (0.7e9, 2.3e9), n_points=4001)
    assert len(coarse[0]) == len(fine[0]) == 2
    for a, b in zip(coarse[0], fine[0]):
        assert abs(a.lo - b.lo) < 1e6
        assert abs(a.hi - b.hi) < 1e6


def test_tuning_sweep_preserves_input_order(geometry, resonator, varactor):
    both, _, _ = tuning_sweep(geometry, resonator, varactor, [15.0, 0.0], (0.7e9, 2.3e9))
    only0, _, _ = tuning_sweep(geometry, resonator, varactor, [0.0], (0.7e9, 2.3e9))
    assert both[1] == only0[0]
    assert both[0] != both[1]


def test_tuning_sweep_requires_voltages(geometry, resonator, varactor):
    with pytest.raises(ValueError):
        tuning_sweep(geometry, resonator, varactor, [], (0.7e9, 2.3e9))


def test_tuning_sweep_each_bias_yields_two_bands(geometry, resonator, varactor):
    """Both bias extremes should show two distinct -6 dB bands in the window."""
    per_v, _, _ = tuning_sweep(geometry, resonator, varactor, [0.0, 15.0], (0.7e9, 2.3e9))
    assert [len(bs) for bs in per_v] == [2, 2]
