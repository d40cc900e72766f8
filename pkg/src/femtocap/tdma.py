"""Capacity in orthogonal multiple access (TDMA, or OFDMA per subband).

Closed access and the K = 1 open-access case have exact closed forms; the
general K > 1 open-access case is evaluated only by the Monte Carlo engine
(the joint order-statistic probabilities have no closed form).
"""

from __future__ import annotations

import math

from .analytic import cdf_interference_model
from .model import NetworkConfig, home_interference_factor
from .policy import TDMA, AllocationPolicy, RateReport, SirTargets


def _capped_exponent(rate: float, share: float, cap: float) -> float:
    """min(rate/share, cap), with share = 0 meaning the backhaul cap binds."""
    if share <= 0.0:
        return cap
    return min(rate / share, cap)


def sir_targets_tdma(
    cfg: NetworkConfig, policy: AllocationPolicy, l: int, n: int
) -> SirTargets:
    """SIR targets with L of N cellular users served at the FAP.

    Home and handed-off users get 2^min(C/share, C_b) - 1 for their time
    share; each remaining macrocell user gets a 1/(N-L) slot, hence the
    target 2^((N-L)C) - 1.
    """
    if not 0 <= l <= min(policy.k, n):
        raise ValueError(f"need 0 <= l <= min(K, N), got l={l}")
    lams, mus = policy.materialize(n)
    return SirTargets(
        gamma_f=2.0 ** _capped_exponent(cfg.C, lams[l], cfg.C_b) - 1.0,
        gamma_h=2.0 ** _capped_exponent(cfg.C, mus[l], cfg.C_b) - 1.0,
        gamma_c=2.0 ** ((n - l) * cfg.C) - 1.0,
        scheme=TDMA,
    )


def closed_access_tdma(cfg: NetworkConfig, n: int) -> RateReport:
    """Exact closed-access rates.

    The home user's rate is the slot-averaged non-outage probability and does
    not depend on N; the macrocell users' SIR is deterministic, so their sum
    throughput is an all-or-nothing indicator.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gamma_f0 = 2.0 ** min(cfg.C, cfg.C_b) - 1.0
    c0 = min(cfg.C, cfg.C_b) * cdf_interference_model(cfg.P_f / (cfg.P_c * gamma_f0), cfg)
    gamma_c0 = 2.0 ** (n * cfg.C) - 1.0
    i0 = home_interference_factor(cfg)
    ok = i0 * cfg.P_c / cfg.P_f >= gamma_c0
    csum = n * cfg.C if ok else 0.0
    return RateReport(
        c0=c0,
        csum=csum,
        csum_macro=csum,
        meta={"scheme": TDMA, "access": "closed", "n": n, "k": 0},
    )


def cutoff_closed_tdma(cfg: NetworkConfig) -> int:
    """Largest N for which closed-access macrocell users stay feasible."""
    i0 = home_interference_factor(cfg)
    return math.floor(math.log2(1.0 + cfg.P_c * i0 / cfg.P_f) / cfg.C)


def open_access_tdma_k1(
    cfg: NetworkConfig, policy: AllocationPolicy, n: int
) -> RateReport:
    """Exact open-access rates when the FAP serves at most one cellular user."""
    if policy.k != 1:
        raise ValueError("closed form requires a K = 1 policy")
    if n < 2:
        raise ValueError("n must be >= 2 (formulas divide by n - 1)")
    lams, mus = policy.materialize(n)
    t0 = sir_targets_tdma(cfg, policy, 0, n)
    t1 = sir_targets_tdma(cfg, policy, 1, n)
    i0 = home_interference_factor(cfg)

    f0 = cdf_interference_model(cfg.P_f / (cfg.P_c * t0.gamma_f), cfg)
    f1 = cdf_interference_model(cfg.P_f / (cfg.P_c * t1.gamma_f), cfg)
    fh = cdf_interference_model(cfg.P_f / (cfg.P_c * t1.gamma_h), cfg)
    a0 = f0**n
    cap0 = min(cfg.C, lams[0] * cfg.C_b)
    cap1 = min(cfg.C, lams[1] * cfg.C_b)
    c0 = cap0 * a0 + cap1 * (n / (n - 1.0)) * f1 * (1.0 - f0 ** (n - 1))

    p_h1 = (n / (n - 1.0)) * fh * (1.0 - f0 ** (n - 1))
    ok_c0 = i0 * cfg.P_c / cfg.P_f >= t0.gamma_c
    ok_c1 = i0 * cfg.P_c / cfg.P_f >= t1.gamma_c
    f_loud = cdf_interference_model(cfg.P_f * t1.gamma_c / cfg.P_c, cfg)
    p_c1 = lams[1] * float(ok_c1) * (1.0 - a0) + mus[1] * min(1.0 - a0, 1.0 - f_loud**n)
    csum = (
        n * cfg.C * float(ok_c0) * a0
        + cfg.C * (n - 1) * p_c1
        + min(cfg.C, mus[1] * cfg.C_b) * p_h1
    )
    csum_macro = n * cfg.C * float(ok_c0) * a0 + cfg.C * (n - 1) * p_c1
    return RateReport(
        c0=c0,
        csum=csum,
        csum_macro=csum_macro,
        meta={
            "scheme": TDMA,
            "access": "open",
            "n": n,
            "k": 1,
            "p_a0": a0,
            "p_h1": p_h1,
            "p_c1": p_c1,
        },
    )


def asymptotic_home_rate_tdma(cfg: NetworkConfig, lambda1: float) -> tuple[float, float]:
    """Home-user rate limits as N grows without bound, (closed, open).

    The open limit keeps lambda_1 fixed while the loud neighbor's time share
    vanishes, so handing it off stops paying; open falls below closed for any
    lambda_1 < 1.
    """
    if not 0.0 < lambda1 <= 1.0:
        raise ValueError("lambda1 must lie in (0, 1]")
    gamma_f0 = 2.0 ** min(cfg.C, cfg.C_b) - 1.0
    gamma_f1 = 2.0 ** min(cfg.C / lambda1, cfg.C_b) - 1.0
    closed = min(cfg.C, cfg.C_b) * cdf_interference_model(cfg.P_f / (cfg.P_c * gamma_f0), cfg)
    open_ = min(cfg.C, lambda1 * cfg.C_b) * cdf_interference_model(
        cfg.P_f / (cfg.P_c * gamma_f1), cfg
    )
    return closed, open_
