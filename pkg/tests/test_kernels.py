import os
import subprocess
import sys

import numpy as np
import pytest

from femtocap import kernels
from femtocap.kernels import _numbaimpl, _numpy
from femtocap.model import sample_factors
from femtocap.montecarlo import _cdma_params, _tdma_params
from femtocap.policy import fair_policy


@pytest.mark.parametrize("scheme,n,k", [("tdma", 15, 0), ("tdma", 25, 3), ("cdma", 15, 0), ("cdma", 40, 2)])
def test_backends_bit_identical(cfg, scheme, n, k):
    rng = np.random.default_rng(hash((scheme, n, k)) % 2**32)
    ordered = np.sort(sample_factors(500 * n, cfg, rng).reshape(500, n), axis=1)
    policy = fair_policy(k)
    if scheme == "tdma":
        params = _tdma_params(cfg, policy, n)
        outs = [m.simulate_tdma(ordered.copy(), *params) for m in (_numbaimpl, _numpy)]
    else:
        params = _cdma_params(cfg, policy, n)
        outs = [m.simulate_cdma(ordered.copy(), *params) for m in (_numbaimpl, _numpy)]
    for a, b in zip(*outs):
        assert np.array_equal(a, b)


def test_outputs_within_bounds(cfg):
    rng = np.random.default_rng(77)
    n, k = 30, 3
    ordered = np.sort(sample_factors(300 * n, cfg, rng).reshape(300, n), axis=1)
    c0, csum, macro, l = _numpy.simulate_tdma(ordered, *_tdma_params(cfg, fair_policy(k), n))
    assert np.all((0 <= l) & (l <= k))
    assert np.all((0.0 <= c0) & (c0 <= min(cfg.C, cfg.C_b)))
    assert np.all((0.0 <= csum) & (csum <= n * cfg.C + 1e-12))
    assert np.all(macro <= csum + 1e-12)


def test_env_flag_selects_backend():
    env = dict(os.environ, FEMTOCAP_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", "from femtocap import kernels; print(kernels.active_backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_set_backend_roundtrip():
    original = kernels.active_backend()
    try:
        assert kernels.set_backend("numpy") == "numpy"
        assert kernels.active_backend() == "numpy"
        assert kernels.set_backend("numba") == "numba"
    finally:
        kernels.set_backend(original)


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
