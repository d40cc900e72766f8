"""Capacity in non-orthogonal multiple access (CDMA).

Interference is additive, so outage events involve the sum CDF G_I, which
has no closed form; it is evaluated by the seeded Monte Carlo estimator
from .analytic and the results carry the propagated standard error. The
open-access rates admit analytic lower bounds (evaluated here); exact
open-access values come from the Monte Carlo engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import cdf_interference_model, cdf_sum_mc, order_tail
from .model import NetworkConfig, home_interference_factor
from .policy import CDMA, AllocationPolicy, RateReport, SirTargets


@dataclass(frozen=True)
class LowerBound:
    """Analytic lower bound with the Monte Carlo error of its G_I factors.

    degenerate marks a bound whose macrocell term collapsed to 0 because the
    per-user SIR target is infeasible at this loading (see theorem notes).
    """

    value: float
    se: float
    degenerate: bool = False


def sir_targets_cdma(cfg: NetworkConfig, policy: AllocationPolicy, l: int, n: int) -> SirTargets:
    """SIR targets with L users at the FAP; spreading divides all targets by G.

    Rate caps enter through the backhaul shares; the macrocell target does
    not depend on L or N because CDMA users transmit continuously.
    """
    if not 0 <= l <= policy.k:
        raise ValueError(f"need 0 <= l <= K, got l={l}")
    lams, mus = policy.materialize(n)
    return SirTargets(
        gamma_f=(2.0 ** min(cfg.C, lams[l] * cfg.C_b) - 1.0) / cfg.G,
        gamma_h=(2.0 ** min(cfg.C, mus[l] * cfg.C_b) - 1.0) / cfg.G,
        gamma_c=(2.0**cfg.C - 1.0) / cfg.G,
        scheme=CDMA,
    )


def _gamma_f0(cfg: NetworkConfig) -> float:
    return (2.0 ** min(cfg.C, cfg.C_b) - 1.0) / cfg.G


def _gamma_c(cfg: NetworkConfig) -> float:
    return (2.0**cfg.C - 1.0) / cfg.G


def closed_access_cdma(
    cfg: NetworkConfig, n: int, gi_reps: int, rng: np.random.Generator
) -> RateReport:
    """Closed-access rates; the home-user term needs G_I(N, .) via Monte Carlo.

    meta carries the dominant-interferer upper-bound variant of c0 for
    bracketing. The macrocell indicator is exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gamma_f0 = _gamma_f0(cfg)
    cap0 = min(cfg.C, cfg.C_b)
    arg = cfg.P_f / (cfg.P_c * gamma_f0)
    gi, gi_se = cdf_sum_mc(n, arg, cfg, gi_reps, rng)
    i0 = home_interference_factor(cfg)
    ok = cfg.P_c / (cfg.P_f / i0 + (n - 1) * cfg.P_c) >= _gamma_c(cfg)
    csum = n * cfg.C if ok else 0.0
    return RateReport(
        c0=cap0 * gi,
        csum=csum,
        se_c0=cap0 * gi_se,
        csum_macro=csum,
        meta={
            "scheme": CDMA,
            "access": "closed",
            "n": n,
            "k": 0,
            "c0_upper": cap0 * cdf_interference_model(arg, cfg) ** n,
        },
    )


def cutoff_closed_cdma(cfg: NetworkConfig, printed_variant: bool = False) -> int:
    """Largest N keeping closed-access macrocell users feasible.

    Default: per-user target (2^C - 1)/G against the constant received SIR
    P_c / (P_f/I_0 + (N-1) P_c), which reproduces the reference operating
    points. printed_variant=True instead scales the target as 2^(N C),
    carrying the slot-style rate-SIR map into CDMA; it yields a far smaller
    cutoff and is kept only for comparison.
    """
    i0 = home_interference_factor(cfg)
    base = cfg.P_f / (i0 * cfg.P_c)
    if not printed_variant:
        # P_c / (P_f/I_0 + (N-1) P_c) >= (2^C - 1)/G, linear in N
        return math.floor(1.0 + cfg.G / (2.0**cfg.C - 1.0) - base)
    n = 0
    while (2.0 ** ((n + 1) * cfg.C) - 1.0) / cfg.G <= 1.0 / (base + n):
        n += 1
    return n


def home_rate_lower_bound_cdma(
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    n: int,
    gi_reps: int,
    rng: np.random.Generator,
) -> LowerBound:
    """Lower bound on the open-access home-user rate.

    Term L combines the order-statistic tail P(I_(N-L+1) > P_f/(P_c Gamma_f,L-1))
    with G_I(N-L, (P_f/P_c)(1/Gamma_f,L - L)); a target with 1/Gamma_f,L <= L
    is infeasible against the FAP's own L served users, so that term is 0.
    Every factor is clamped to [0, 1].
    """
    if not n > policy.k >= 1:
        raise ValueError("need N > K >= 1")
    lams, _ = policy.materialize(n)
    gammas = [sir_targets_cdma(cfg, policy, l, n).gamma_f for l in range(policy.k + 1)]

    arg0 = cfg.P_f / (cfg.P_c * gammas[0])
    gi0, se0 = cdf_sum_mc(n, arg0, cfg, gi_reps, rng)
    value = min(cfg.C, lams[0] * cfg.C_b) * gi0
    var = (min(cfg.C, lams[0] * cfg.C_b) * se0) ** 2

    for l in range(1, policy.k + 1):
        tail = order_tail(n, l, cfg.P_f / (cfg.P_c * gammas[l - 1]), cfg)
        headroom = 1.0 / gammas[l] - l
        if headroom <= 0.0:
            continue
        gi, se = cdf_sum_mc(n - l, cfg.P_f / cfg.P_c * headroom, cfg, gi_reps, rng)
        cap = min(cfg.C, lams[l] * cfg.C_b)
        value += cap * tail * gi
        var += (cap * tail * se) ** 2
    return LowerBound(value=value, se=math.sqrt(var))


def sum_throughput_lower_bound_cdma_k1(
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    n: int,
    gi_reps: int,
    rng: np.random.Generator,
) -> LowerBound:
    """Lower bound on the open-access cellular sum throughput for K = 1."""
    if policy.k != 1:
        raise ValueError("bound requires a K = 1 policy")
    if n < 2:
        raise ValueError("n must be >= 2")
    lams, mus = policy.materialize(n)
    t0 = sir_targets_cdma(cfg, policy, 0, n)
    t1 = sir_targets_cdma(cfg, policy, 1, n)
    i0 = home_interference_factor(cfg)

    arg0 = cfg.P_f / (cfg.P_c * t0.gamma_f)
    f0_n = cdf_interference_model(arg0, cfg) ** n

    gi0, se0 = cdf_sum_mc(n, arg0, cfg, gi_reps, rng)
    ok_closed = cfg.P_c / (cfg.P_f / i0 + (n - 1) * cfg.P_c) >= t0.gamma_c
    term0 = n * cfg.C * float(ok_closed) * gi0
    var = (n * cfg.C * float(ok_closed) * se0) ** 2

    # handed-off user: needs SIR headroom 1 - Gamma_h,1 > 0 at the FAP
    p_h1 = 0.0
    if t1.gamma_h < 1.0:
        arg_h = cfg.P_f * (1.0 - t1.gamma_h) / (cfg.P_c * t1.gamma_h) if t1.gamma_h > 0.0 else math.inf
        if math.isinf(arg_h):
            gih, seh = 1.0, 0.0
        else:
            gih, seh = cdf_sum_mc(n - 1, arg_h, cfg, gi_reps, rng)
        p_h1 = (1.0 - f0_n) * gih
        var += (min(cfg.C, mus[1] * cfg.C_b) * (1.0 - f0_n) * seh) ** 2

    # macrocell users: the loud neighbor must be loud enough that serving it
    # at the FAP leaves the per-user target feasible
    denom = cfg.P_c - (n - 2) * cfg.P_c * t1.gamma_c - cfg.P_f * t1.gamma_c / i0
    degenerate = denom <= 0.0
    if degenerate:
        p_c1 = 0.0
    else:
        y = max(cfg.P_f * t1.gamma_c / denom, arg0)
        p_c1 = 1.0 - cdf_interference_model(y, cfg) ** n

    value = term0 + (n - 1) * cfg.C * p_c1 + min(cfg.C, mus[1] * cfg.C_b) * p_h1
    return LowerBound(value=value, se=math.sqrt(var), degenerate=degenerate)
