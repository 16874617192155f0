"""Backend parity: the compiled kernels must match the pure-Python ones."""

import math

import numpy as np
import pytest

from ifatuner import kernels
from ifatuner.antmodel import AntennaGeometry, pack_params
from ifatuner.rfcore import ResonatorNetwork


def _random_params(rng):
    """Random but physical parameter vector via the public dataclasses."""
    geom = AntennaGeometry(
        z0=rng.uniform(30.0, 300.0),
        theta_open_ref=rng.uniform(0.2, 2.5),
        theta_short_ref=rng.uniform(0.05, 0.8),
        f_ref=1e9,
        z_end="open" if rng.uniform() < 0.5 else complex(rng.uniform(0.5, 50.0),
                                                         rng.uniform(-1200.0, 1200.0)),
        feed_fraction=rng.uniform(0.0, 1.0),
    )
    if rng.uniform() < 0.85:
        net = ResonatorNetwork(
            l1=10.0 ** rng.uniform(-9.3, -7.5),
            c1=10.0 ** rng.uniform(-12.7, -11.0),
            include_c2_in_rf=bool(rng.uniform() < 0.3),
            include_r1_in_rf=bool(rng.uniform() < 0.3),
        )
    else:
        net = None
    return pack_params(geom, net)


def test_both_backends_available():
    backends = kernels.available_backends()
    assert "python" in backends
    assert "compiled" in backends, "compiled extension failed to build or import"


def test_zin_grid_parity_on_random_inputs():
    """Python and compiled zin_grid agree to near machine precision."""
    backends = kernels.available_backends()
    py = backends["python"]
    cy = backends["compiled"]
    rng = np.random.default_rng(47)
    freqs = np.linspace(0.4e9, 2.6e9, 1501)
    for _ in range(40):
        params = _random_params(rng)
        za = py.zin_grid(freqs, params)
        zb = cy.zin_grid(freqs, params)
        scale = np.maximum(np.abs(za), 1.0)
        assert np.max(np.abs(za - zb) / scale) < 1e-12


def test_residual_parity_on_random_inputs():
    backends = kernels.available_backends()
    py = backends["python"]
    cy = backends["compiled"]
    rng = np.random.default_rng(48)
    for _ in range(60):
        params = _random_params(rng)
        f = float(rng.uniform(0.4e9, 2.6e9))
        ra = py.residual_im(f, params)
        rb = cy.residual_im(f, params)
        assert abs(ra - rb) <= 1e-12 * max(1.0, abs(ra))


def test_dispatcher_validates_param_length():
    freqs = np.linspace(1e9, 2e9, 5)
    with pytest.raises(ValueError):
        kernels.zin_grid(freqs, np.zeros(5))


def test_pole_clip_is_identical_across_backends():
    """At a shorted-stub pole both backends clip to the same magnitude."""
    geom = AntennaGeometry(
        z0=100.0, theta_open_ref=1.0, theta_short_ref=math.pi / 2.0, f_ref=1e9,
        z_end="open", feed_fraction=1.0,
    )
    params = pack_params(geom, None)
    freqs = np.array([1e9])
    backends = kernels.available_backends()
    za = backends["python"].zin_grid(freqs, params)[0]
    zb = backends["compiled"].zin_grid(freqs, params)[0]
    assert abs(za - zb) <= 1e-6 * abs(za)
