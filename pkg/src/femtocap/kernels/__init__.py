"""Backend selection for the hot Monte Carlo kernels.

Two interchangeable implementations exist: numba-jitted loops (default) and
a pure-numpy vectorized fallback. Select with the FEMTOCAP_BACKEND
environment variable ("numba" or "numpy"); if numba is unavailable the
numpy path is used automatically. Both backends produce bit-identical
output for the same inputs (see benchmarks/bench_kernels.py for the speed
comparison).
"""

from __future__ import annotations

import os
import warnings

_active = None
_module = None


def _load(name: str):
    if name == "numpy":
        from . import _numpy

        return _numpy
    if name == "numba":
        from . import _numbaimpl

        return _numbaimpl
    raise ValueError(f"unknown kernel backend {name!r} (expected 'numba' or 'numpy')")


def set_backend(name: str) -> str:
    """Activate a kernel backend; returns the name actually in effect."""
    global _active, _module
    if name == "numba":
        try:
            _module = _load("numba")
            _active = "numba"
        except ImportError as exc:
            warnings.warn(f"numba backend unavailable ({exc}); using numpy fallback")
            _module = _load("numpy")
            _active = "numpy"
    else:
        _module = _load(name)
        _active = name
    return _active


def active_backend() -> str:
    return _active


def simulate_tdma(*args):
    return _module.simulate_tdma(*args)


def simulate_cdma(*args):
    return _module.simulate_cdma(*args)


set_backend(os.environ.get("FEMTOCAP_BACKEND", "numba"))
