"""File emitter tests: formatting, CSV/Touchstone/SVG content, determinism."""

import numpy as np
import pytest

from ifatuner.antmodel import sweep
from ifatuner.bandplan import FrequencyIntervalSet, Interval
from ifatuner.errors import ConfigError
from ifatuner.outputs import (
    BANDS_CSV_HEADER,
    SWEEP_CSV_HEADER,
    TOUCHSTONE_OPTION_LINE,
    bands_csv_text,
    format_sig,
    read_bands_csv,
    svg_text,
    sweep_csv_text,
    touchstone_text,
    write_bands_csv,
    write_sweep_csv,
    write_svg,
    write_touchstone,
)


@pytest.fixture(scope="module")
def profile(geometry, resonator):
    # Dense enough to capture the narrow resonance dips below -6 dB.
    return sweep(geometry, resonator, 0.7e9, 2.3e9, 2001)


def test_format_sig_basic_cases():
    assert format_sig(1e9) == "1000000000"
    assert format_sig(844e6) == "844000000"
    assert format_sig(-6.0) == "-6"
    assert format_sig(0.0) == "0"
    assert format_sig(-0.0) == "0"
    assert format_sig(0.123456789123) == "0.123456789"


def test_format_sig_round_trips_to_nine_digits():
    rng = np.random.default_rng(55)
    for _ in range(500):
        x = float(rng.uniform(-1e10, 1e10)) * 10.0 ** float(rng.integers(-9, 3))
        back = float(format_sig(x))
        assert abs(back - x) <= 1e-8 * abs(x) + 1e-300


def test_sweep_csv_header_and_shape(profile):
    text = sweep_csv_text(profile)
    lines = text.splitlines()
    assert lines[0] == SWEEP_CSV_HEADER
    assert lines[0] == "freq_hz,re_zin_ohm,im_zin_ohm,s11_db"
    assert len(lines) == 1 + len(profile)
    assert text.endswith("\n")
    assert all(len(line.split(",")) == 4 for line in lines[1:])


def test_sweep_csv_values_round_trip(profile):
    lines = sweep_csv_text(profile).splitlines()[1:]
    for i in (0, 50, 100):
        f_s, re_s, im_s, s11_s = lines[i].split(",")
        assert float(f_s) == pytest.approx(profile.freqs[i], rel=1e-8)
        assert float(re_s) == pytest.approx(profile.z_in[i].real, rel=1e-8, abs=1e-8)
        assert float(im_s) == pytest.approx(profile.z_in[i].imag, rel=1e-8, abs=1e-8)
        assert float(s11_s) == pytest.approx(profile.s11_db[i], rel=1e-8)


def test_touchstone_option_line_and_reflection(profile):
    lines = touchstone_text(profile).splitlines()
    assert lines[0].startswith("!")
    assert lines[1] == TOUCHSTONE_OPTION_LINE
    assert lines[1] == "# Hz S RI R 50"
    assert len(lines) == 2 + len(profile)
    f_s, gr_s, gi_s = lines[2].split(" ")
    gamma = complex(float(gr_s), float(gi_s))
    z = 50.0 * (1 + gamma) / (1 - gamma)
    assert z == pytest.approx(profile.z_in[0], rel=1e-6, abs=1e-6)
    assert float(f_s) == pytest.approx(profile.freqs[0], rel=1e-8)


def test_bands_csv_write_read_round_trip(tmp_path):
    rows = [
        (0.0, FrequencyIntervalSet((Interval(822e6, 866e6), Interval(1.42e9, 1.73e9)))),
        (15.0, FrequencyIntervalSet((Interval(922e6, 1.05e9, truncated_hi=True),))),
    ]
    p = tmp_path / "bands.csv"
    write_bands_csv(rows, str(p))
    text = p.read_text()
    assert text.splitlines()[0] == BANDS_CSV_HEADER
    assert text.splitlines()[0] == "voltage_v,band_lo_hz,band_hi_hz,truncated"
    back = read_bands_csv(str(p))
    assert [v for v, _ in back] == [0.0, 15.0]
    for (v0, s0), (v1, s1) in zip(rows, back):
        assert len(s0) == len(s1)
        for a, b in zip(s0, s1):
            assert b.lo == pytest.approx(a.lo, rel=1e-8)
            assert b.hi == pytest.approx(a.hi, rel=1e-8)
            assert b.truncated == a.truncated


def test_bands_csv_flag_column_is_zero_or_one():
    rows = [
        (0.0, FrequencyIntervalSet((Interval(1e9, 1.1e9, truncated_lo=True),))),
        (15.0, FrequencyIntervalSet((Interval(1.2e9, 1.3e9),))),
    ]
    body = bands_csv_text(rows).splitlines()[1:]
    assert body[0].endswith(",1")
    assert body[1].endswith(",0")


def test_read_bands_csv_rejects_malformed(tmp_path):
    cases = [
        ("nope\n1,2,3,0\n", "expected header"),
        (BANDS_CSV_HEADER + "\n0,1e9,1.1e9\n", "4 columns"),
        (BANDS_CSV_HEADER + "\n0,abc,1.1e9,0\n", "bad number"),
        (BANDS_CSV_HEADER + "\n0,1e9,1.1e9,2\n", "truncated must be"),
        (BANDS_CSV_HEADER + "\n0,1.1e9,1e9,0\n", "lo < hi"),
    ]
    for text, fragment in cases:
        p = tmp_path / "bad.csv"
        p.write_text(text, encoding="utf-8")
        with pytest.raises(ConfigError, match=fragment):
            read_bands_csv(str(p))


def test_read_bands_csv_missing_file():
    with pytest.raises(ConfigError, match="cannot read bands"):
        read_bands_csv("/nonexistent/bands.csv")


def test_read_bands_csv_tolerates_blank_lines(tmp_path):
    p = tmp_path / "bands.csv"
    p.write_text(BANDS_CSV_HEADER + "\n\n0,1e9,1.1e9,0\n\n", encoding="utf-8")
    rows = read_bands_csv(str(p))
    assert len(rows) == 1 and len(rows[0][1]) == 1


def test_svg_structure_and_threshold_rule(profile):
    text = svg_text(profile, threshold_db=-6.0)
    assert 'viewBox="0 0 800 500"' in text
    assert 'width="800" height="500"' in text
    assert 'fill="white"' in text
    assert "stroke-dasharray" in text
    assert "-6 dB" in text
    assert "<polyline" in text
    assert "frequency (GHz)" in text
    assert "S11 (dB)" in text


def test_svg_omits_threshold_rule_outside_axis(profile):
    floor = float(np.min(profile.s11_db))
    text = svg_text(profile, threshold_db=floor - 100.0)
    assert "stroke-dasharray" not in text


def test_svg_axis_floor_is_five_db_multiple(profile):
    text = svg_text(profile)
    deepest = float(np.min(profile.s11_db))
    floor = max(5.0 * np.floor(deepest / 5.0), -40.0)
    assert f'font-family="sans-serif">{floor:.0f}</text>' in text


def test_all_writers_are_byte_deterministic(profile, tmp_path):
    rows = [(0.0, FrequencyIntervalSet((Interval(822e6, 866e6),)))]
    pairs = []
    for name, writer, arg in [
        ("sweep", write_sweep_csv, profile),
        ("ts", write_touchstone, profile),
        ("svg", write_svg, profile),
        ("bands", write_bands_csv, rows),
    ]:
        a, b = tmp_path / f"{name}_a", tmp_path / f"{name}_b"
        writer(arg, str(a))
        writer(arg, str(b))
        pairs.append((a.read_bytes(), b.read_bytes()))
    for blob_a, blob_b in pairs:
        assert blob_a == blob_b and len(blob_a) > 0
