"""Backend dispatch for the grid-evaluation kernels.

The compiled extension (ifatuner._kernels_cy) is preferred when it imported
cleanly; otherwise the NumPy implementation (ifatuner._kernels_py) takes over
with identical semantics, so a failed extension build only costs speed.

Set IFATUNER_BACKEND=python or =compiled to force a choice (optional; nothing
requires it). Forcing "compiled" raises if the extension is unavailable.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from ._kernels_py import N_PARAMS

_choice = os.environ.get("IFATUNER_BACKEND", "").strip().lower()
if _choice == "python":
    _impl = _kernels_py
elif _choice == "compiled":
    from . import _kernels_cy as _impl
elif _choice == "":
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py
else:
    raise RuntimeError(
        f"IFATUNER_BACKEND must be 'python' or 'compiled', got {_choice!r}"
    )

BACKEND: str = _impl.BACKEND


def available_backends() -> dict:
    """Map of importable backend name -> module (for parity tests, benchmarks)."""
    out = {_kernels_py.BACKEND: _kernels_py}
    try:
        from . import _kernels_cy
        out[_kernels_cy.BACKEND] = _kernels_cy
    except ImportError:
        pass
    return out


def _as_grid(freqs) -> np.ndarray:
    return np.ascontiguousarray(freqs, dtype=np.float64)


def _as_params(p) -> np.ndarray:
    p = np.ascontiguousarray(p, dtype=np.float64)
    if p.shape != (N_PARAMS,):
        raise ValueError(f"parameter vector must have shape ({N_PARAMS},), got {p.shape}")
    return p


def zin_grid(freqs, params) -> np.ndarray:
    """Feed-tap input impedance over a frequency grid (complex128 array)."""
    return _impl.zin_grid(_as_grid(freqs), _as_params(params))


def residual_grid(freqs, params) -> np.ndarray:
    """Resonance residual Z_LC - (Z_short - Z_open) over a grid (complex128)."""
    return _impl.residual_grid(_as_grid(freqs), _as_params(params))


def residual_im(f: float, params) -> float:
    """Scalar Im of the resonance residual at one frequency."""
    return _impl.residual_im(float(f), _as_params(params))
