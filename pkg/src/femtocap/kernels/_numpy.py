"""Pure-numpy realization kernels (fallback backend).

Each function consumes a batch of ascending-sorted
interference-factor rows (one row per realization) and returns
per-realization quantities:

    c0    home-user rate contribution
    csum  total cellular sum-throughput contribution
    macro the part of csum earned at the macrocell BS
    l     number of users handed off to the FAP

Semantics (including summation order) are kept bit-identical to the numba
backend so estimates do not depend on the selected backend.
"""

from __future__ import annotations

import numpy as np


def _handoff_count(outage: np.ndarray) -> np.ndarray:
    # number of leading True entries per row == handed-off users
    if outage.shape[1] == 0:
        return np.zeros(outage.shape[0], dtype=np.int64)
    return np.cumprod(outage, axis=1).sum(axis=1).astype(np.int64)


def simulate_tdma(
    ordered, i0_ok, tau_f, tau_h, thr_loud, lams, mus, cap_f, cap_h, rate_c
):
    b, n = ordered.shape
    k = tau_f.size - 1

    outage = np.empty((b, k), dtype=np.int64)
    for j in range(k):
        outage[:, j] = ordered[:, n - 1 - j] > tau_f[j]
    l = _handoff_count(outage)

    # home user: worst remaining slot cleared below K, slot average at K
    cnt_f = (ordered <= tau_f[k]).sum(axis=1)
    s_f = np.where(l < k, 1.0, np.minimum(cnt_f, n - k) / (n - k))
    c0 = cap_f[l] * s_f

    # handed-off users, slot-averaged over the n - l macrocell interferers
    cnt_h = (ordered <= tau_h[l][:, None]).sum(axis=1)
    s_h = np.minimum(cnt_h, n - l) / (n - l)
    served = l * cap_h[l] * s_h

    # macrocell users: home-user slot plus each handed-off user's slot
    cnt_loud = np.minimum((ordered >= thr_loud[l][:, None]).sum(axis=1), l)
    p_c = lams[l] * i0_ok[l] + mus[l] * cnt_loud
    macro = (n - l) * rate_c * p_c

    csum = macro + served
    return c0, csum, macro, l


def simulate_cdma(
    ordered, pf_over_i0, gamma_f, gamma_h, gamma_c, cap_f, cap_h, p_f, p_c, rate_c
):
    b, n = ordered.shape
    k = gamma_f.size - 1
    prefix = np.cumsum(ordered, axis=1)

    outage = np.empty((b, k), dtype=np.int64)
    for j in range(k):
        outage[:, j] = p_f < gamma_f[j] * (j * p_f + p_c * prefix[:, n - 1 - j])
    l = _handoff_count(outage)

    rows = np.arange(b)
    prefix_l = prefix[rows, n - 1 - l]
    s_f = np.where(
        l < k, 1.0, (p_f >= gamma_f[k] * (k * p_f + p_c * prefix[:, n - 1 - k])) * 1.0
    )
    c0 = cap_f[l] * s_f

    s_h = (p_f >= gamma_h[l] * (l * p_f + p_c * prefix_l)) * 1.0
    served = l * cap_h[l] * s_h

    # femto-to-macro interference: home user plus the l loudest, power-controlled
    recip_suffix = np.zeros(b)
    if k > 0:
        rev_csum = np.cumsum(1.0 / ordered[:, ::-1], axis=1)
        has = l > 0
        recip_suffix[has] = rev_csum[rows[has], l[has] - 1]
    ok = p_c >= gamma_c[l] * ((n - l - 1) * p_c + pf_over_i0 + p_f * recip_suffix)
    macro = (n - l) * rate_c * ok

    csum = macro + served
    return c0, csum, macro, l
