"""Numba-compiled realization kernels (default backend).

Same contracts as ._numpy; per-realization loops instead of broadcasting.
Arithmetic mirrors the numpy backend operation for operation so both
produce bit-identical outputs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _count_le(row, value):
    # row is sorted ascending
    return np.searchsorted(row, value, side="right")


@njit(cache=True, nogil=True)
def simulate_tdma(
    ordered, i0_ok, tau_f, tau_h, thr_loud, lams, mus, cap_f, cap_h, rate_c
):
    b, n = ordered.shape
    k = tau_f.size - 1
    c0 = np.empty(b)
    csum = np.empty(b)
    macro = np.empty(b)
    lout = np.empty(b, dtype=np.int64)
    for idx in range(b):
        row = ordered[idx]
        l = 0
        while l < k and row[n - 1 - l] > tau_f[l]:
            l += 1

        if l < k:
            s_f = 1.0
        else:
            cnt_f = _count_le(row, tau_f[k])
            s_f = min(cnt_f, n - k) / (n - k)
        c0[idx] = cap_f[l] * s_f

        cnt_h = _count_le(row, tau_h[l])
        s_h = min(cnt_h, n - l) / (n - l)
        served = l * cap_h[l] * s_h

        cnt_ge = n - np.searchsorted(row, thr_loud[l], side="left")
        cnt_loud = min(cnt_ge, l)
        p_c = lams[l] * i0_ok[l] + mus[l] * cnt_loud
        macro[idx] = (n - l) * rate_c * p_c
        csum[idx] = macro[idx] + served
        lout[idx] = l
    return c0, csum, macro, lout


@njit(cache=True, nogil=True)
def simulate_cdma(
    ordered, pf_over_i0, gamma_f, gamma_h, gamma_c, cap_f, cap_h, p_f, p_c, rate_c
):
    b, n = ordered.shape
    k = gamma_f.size - 1
    c0 = np.empty(b)
    csum = np.empty(b)
    macro = np.empty(b)
    lout = np.empty(b, dtype=np.int64)
    prefix = np.empty(n)
    for idx in range(b):
        row = ordered[idx]
        acc = 0.0
        for j in range(n):
            acc += row[j]
            prefix[j] = acc

        l = 0
        while l < k and p_f < gamma_f[l] * (l * p_f + p_c * prefix[n - 1 - l]):
            l += 1

        if l < k:
            s_f = 1.0
        else:
            s_f = 1.0 if p_f >= gamma_f[k] * (k * p_f + p_c * prefix[n - 1 - k]) else 0.0
        c0[idx] = cap_f[l] * s_f

        s_h = 1.0 if p_f >= gamma_h[l] * (l * p_f + p_c * prefix[n - 1 - l]) else 0.0
        served = l * cap_h[l] * s_h

        recip_suffix = 0.0
        for m in range(l):
            recip_suffix += 1.0 / row[n - 1 - m]
        ok = p_c >= gamma_c[l] * ((n - l - 1) * p_c + pf_over_i0 + p_f * recip_suffix)
        macro[idx] = (n - l) * rate_c * (1.0 if ok else 0.0)
        csum[idx] = macro[idx] + served
        lout[idx] = l
    return c0, csum, macro, lout
