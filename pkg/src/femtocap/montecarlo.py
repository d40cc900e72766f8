"""Monte Carlo oracle for the two-tier uplink.

Samples user drops, runs the handoff procedure (the FAP admits the loudest
remaining interferer while the home user stays in outage, up to K users),
evaluates the per-realization conditional success probabilities of every
population, and aggregates ergodic rates with standard errors. This is the
only evaluator for general K; closed forms exist only for special cases.

Replications are split into fixed-size blocks; block b draws from the
substream seeded by (master_seed, b), so results are bit-identical for any
worker count. The hot per-block work runs in the selected kernel backend
(numba or numpy, see .kernels).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import InterferenceRealization, NetworkConfig, home_interference_factor, sample_factors
from .policy import CDMA, TDMA, AllocationPolicy, RateReport, closed_policy
from .tdma import sir_targets_tdma
from .cdma import sir_targets_cdma

BLOCK_REPS = 1 << 14


@dataclass(frozen=True)
class AccessOutcome:
    """Result of the handoff procedure for one realization.

    served_ranks are 0-based positions into the ascending order statistics,
    loudest first; served_users are the original user indices.
    """

    l: int
    served_ranks: tuple[int, ...]
    served_users: tuple[int, ...]


@dataclass(frozen=True)
class RealizationRates:
    """Per-realization conditional success masses and rate contributions.

    s_f is the home user's conditional success probability; s_h sums the
    served users' successes (in [0, L]); s_c sums the macrocell users'
    successes (in [0, N-L]).
    """

    s_f: float
    s_h: float
    s_c: float
    c0: float
    csum: float
    csum_macro: float


@dataclass(frozen=True)
class EventDistribution:
    """Estimated P(A_0..A_K) with standard errors."""

    probs: np.ndarray
    se: np.ndarray


def _tdma_params(cfg: NetworkConfig, policy: AllocationPolicy, n: int):
    lams, mus = policy.materialize(n)
    i0 = home_interference_factor(cfg)
    k = policy.k
    tau_f = np.empty(k + 1)
    tau_h = np.empty(k + 1)
    thr_loud = np.empty(k + 1)
    i0_ok = np.empty(k + 1)
    for l in range(k + 1):
        t = sir_targets_tdma(cfg, policy, l, n)
        tau_f[l] = cfg.P_f / (cfg.P_c * t.gamma_f)
        tau_h[l] = cfg.P_f / (cfg.P_c * t.gamma_h)
        thr_loud[l] = cfg.P_f * t.gamma_c / cfg.P_c
        i0_ok[l] = 1.0 if i0 * cfg.P_c / cfg.P_f >= t.gamma_c else 0.0
    cap_f = np.minimum(cfg.C, lams * cfg.C_b)
    cap_h = np.minimum(cfg.C, mus * cfg.C_b)
    return (i0_ok, tau_f, tau_h, thr_loud, lams, mus, cap_f, cap_h, cfg.C)


def _cdma_params(cfg: NetworkConfig, policy: AllocationPolicy, n: int):
    lams, mus = policy.materialize(n)
    i0 = home_interference_factor(cfg)
    k = policy.k
    gamma_f = np.empty(k + 1)
    gamma_h = np.empty(k + 1)
    gamma_c = np.empty(k + 1)
    for l in range(k + 1):
        t = sir_targets_cdma(cfg, policy, l, n)
        gamma_f[l] = t.gamma_f
        gamma_h[l] = t.gamma_h
        gamma_c[l] = t.gamma_c
    cap_f = np.minimum(cfg.C, lams * cfg.C_b)
    cap_h = np.minimum(cfg.C, mus * cfg.C_b)
    return (cfg.P_f / i0, gamma_f, gamma_h, gamma_c, cap_f, cap_h, cfg.P_f, cfg.P_c, cfg.C)


def handoff(
    real: InterferenceRealization,
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    scheme: str,
) -> AccessOutcome:
    """Sequential admission of the loudest remaining interferers.

    At level j (j users already admitted) the home user's outage condition is
    checked against the strongest remaining interferer (TDMA: its slot is the
    worst one) or the aggregate of the remaining users (CDMA); admission
    continues while the outage persists and j < K.
    """
    n = real.n
    k = policy.k
    if k >= n:
        raise ValueError("policy K must be smaller than the number of users")
    ordered = real.ordered
    l = 0
    if scheme == TDMA:
        while l < k:
            t = sir_targets_tdma(cfg, policy, l, n)
            if cfg.P_f / (cfg.P_c * ordered[n - 1 - l]) >= t.gamma_f:
                break
            l += 1
    elif scheme == CDMA:
        while l < k:
            t = sir_targets_cdma(cfg, policy, l, n)
            agg = l * cfg.P_f + cfg.P_c * ordered[: n - l].sum()
            if cfg.P_f / agg >= t.gamma_f:
                break
            l += 1
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    ranks = tuple(range(n - 1, n - 1 - l, -1))
    return AccessOutcome(
        l=l,
        served_ranks=ranks,
        served_users=tuple(int(real.perm[r]) for r in ranks),
    )


def rates_tdma(
    real: InterferenceRealization,
    outcome: AccessOutcome,
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    n: int,
) -> RealizationRates:
    """Exact conditional success probabilities for one TDMA realization.

    Slots are averaged analytically (the schedule is uniform), so no extra
    randomness enters: the home user at L = K succeeds in the slots of the
    remaining users whose factor clears its target, each weighted 1/(N-K).
    """
    if n != real.n:
        raise ValueError("outcome and realization sizes disagree")
    l = outcome.l
    if l >= n:
        raise ValueError("no macrocell users left")
    lams, mus = policy.materialize(n)
    ordered = real.ordered
    k = policy.k
    t = sir_targets_tdma(cfg, policy, l, n)

    if l < k:
        s_f = 1.0
    else:
        tau = cfg.P_f / (cfg.P_c * t.gamma_f)
        s_f = min(int(np.searchsorted(ordered, tau, side="right")), n - k) / (n - k)

    tau_h = cfg.P_f / (cfg.P_c * t.gamma_h)
    s_h_each = min(int(np.searchsorted(ordered, tau_h, side="right")), n - l) / (n - l)
    s_h = l * s_h_each

    thr = cfg.P_f * t.gamma_c / cfg.P_c
    loud_ok = min(n - int(np.searchsorted(ordered, thr, side="left")), l)
    i0_ok = 1.0 if real.i0 * cfg.P_c / cfg.P_f >= t.gamma_c else 0.0
    s_c_each = lams[l] * i0_ok + mus[l] * loud_ok
    s_c = (n - l) * s_c_each

    c0 = min(cfg.C, lams[l] * cfg.C_b) * s_f
    csum_macro = cfg.C * s_c
    csum = csum_macro + min(cfg.C, mus[l] * cfg.C_b) * s_h
    return RealizationRates(s_f, s_h, s_c, c0, csum, csum_macro)


def rates_cdma(
    real: InterferenceRealization,
    outcome: AccessOutcome,
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    n: int,
) -> RealizationRates:
    """Deterministic per-realization success indicators for CDMA.

    All users transmit continuously; success is an indicator on the
    aggregate interference. Macrocell users see the other N-L-1 macro
    users, the home user, and the L handed-off users (power-controlled to
    the FAP, hence P_f / I_(j) each).
    """
    if n != real.n:
        raise ValueError("outcome and realization sizes disagree")
    l = outcome.l
    if l >= n:
        raise ValueError("no macrocell users left")
    lams, mus = policy.materialize(n)
    ordered = real.ordered
    k = policy.k
    t = sir_targets_cdma(cfg, policy, l, n)
    rest = cfg.P_c * ordered[: n - l].sum()

    if l < k:
        s_f = 1.0
    else:
        s_f = 1.0 if cfg.P_f >= t.gamma_f * (l * cfg.P_f + rest) else 0.0

    s_h_each = 1.0 if cfg.P_f >= t.gamma_h * (l * cfg.P_f + rest) else 0.0
    s_h = l * s_h_each

    loud = cfg.P_f * np.sum(1.0 / ordered[n - l :][::-1]) if l else 0.0
    agg = (n - l - 1) * cfg.P_c + cfg.P_f / real.i0 + loud
    s_c_each = 1.0 if cfg.P_c >= t.gamma_c * agg else 0.0
    s_c = (n - l) * s_c_each

    c0 = min(cfg.C, lams[l] * cfg.C_b) * s_f
    csum_macro = cfg.C * s_c
    csum = csum_macro + min(cfg.C, mus[l] * cfg.C_b) * s_h
    return RealizationRates(s_f, s_h, s_c, c0, csum, csum_macro)


def _simulate_block(cfg, scheme, params, n, rows, seed, block_index):
    rng = np.random.default_rng(np.random.SeedSequence((seed, block_index)))
    factors = sample_factors(rows * n, cfg, rng).reshape(rows, n)
    ordered = np.sort(factors, axis=1)
    if scheme == TDMA:
        c0, csum, macro, l = kernels.simulate_tdma(ordered, *params)
    else:
        c0, csum, macro, l = kernels.simulate_cdma(ordered, *params)
    k = params[1].size - 1
    return (
        float(np.sum(c0)),
        float(np.sum(c0 * c0)),
        float(np.sum(csum)),
        float(np.sum(csum * csum)),
        float(np.sum(macro)),
        float(np.sum(macro * macro)),
        np.bincount(l, minlength=k + 1),
    )


def _simulate_block_star(task):
    return _simulate_block(*task)


def _mean_se(total: float, total_sq: float, reps: int) -> tuple[float, float]:
    mean = total / reps
    if reps < 2:
        return mean, 0.0
    var = max(total_sq - reps * mean * mean, 0.0) / (reps - 1)
    return mean, math.sqrt(var / reps)


def estimate(
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    n: int,
    scheme: str,
    access: str,
    reps: int,
    seed: int,
    workers: int = 1,
    block_reps: int = BLOCK_REPS,
) -> tuple[RateReport, EventDistribution]:
    """Estimate rates over independent user drops.

    access="closed" forces K = 0 regardless of the policy. The estimate
    depends only on (cfg, policy, n, scheme, reps, seed, block_reps), never
    on the worker count or scheduling.
    """
    if scheme not in (TDMA, CDMA):
        raise ValueError(f"unknown scheme {scheme!r}")
    if access not in ("open", "closed"):
        raise ValueError(f"access must be 'open' or 'closed', got {access!r}")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if access == "closed":
        policy = closed_policy()
    if n <= policy.k:
        raise ValueError("need more users than the handoff cap K")

    params = _tdma_params(cfg, policy, n) if scheme == TDMA else _cdma_params(cfg, policy, n)
    k = policy.k

    tasks = []
    done = 0
    while done < reps:
        rows = min(block_reps, reps - done)
        tasks.append((cfg, scheme, params, n, rows, seed, len(tasks)))
        done += rows

    if workers > 1 and len(tasks) > 1:
        # kernels run with the GIL released, so threads parallelize; block
        # results are combined in block order either way
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_simulate_block_star, tasks))
    else:
        partials = [_simulate_block_star(t) for t in tasks]

    c0_tot = sum(p[0] for p in partials)
    c0_sq = sum(p[1] for p in partials)
    cs_tot = sum(p[2] for p in partials)
    cs_sq = sum(p[3] for p in partials)
    ma_tot = sum(p[4] for p in partials)
    ma_sq = sum(p[5] for p in partials)
    counts = sum(p[6] for p in partials)

    c0, se_c0 = _mean_se(c0_tot, c0_sq, reps)
    csum, se_csum = _mean_se(cs_tot, cs_sq, reps)
    macro, se_macro = _mean_se(ma_tot, ma_sq, reps)
    probs = counts / reps
    report = RateReport(
        c0=c0,
        csum=csum,
        se_c0=se_c0,
        se_csum=se_csum,
        csum_macro=macro,
        se_csum_macro=se_macro,
        meta={
            "scheme": scheme,
            "access": access,
            "n": n,
            "k": k,
            "reps": reps,
            "seed": seed,
            "policy": policy.name,
        },
    )
    events = EventDistribution(probs=probs, se=np.sqrt(probs * (1.0 - probs) / reps))
    return report, events


def find_open_cutoff(
    cfg: NetworkConfig,
    policy: AllocationPolicy,
    scheme: str,
    eps: float = 1e-3,
    n_max: int = 400,
    reps: int = 100_000,
    seed: int = 0,
    workers: int = 1,
    n_start: int | None = None,
) -> int | None:
    """Largest N at which open access still sustains macrocell throughput.

    Scans N upward and detects the first N whose estimated macrocell-side
    sum throughput falls below eps * C; returns that N minus one. The
    residual rate of the K users served at the FAP stays positive well past
    the cutoff, which is why the detection looks at the macrocell share
    only. n_start skips the low-loading part of the scan when the caller
    already knows throughput is healthy there. Returns None when no
    collapse occurs up to n_max.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    start = max(2, policy.k + 1) if n_start is None else max(n_start, policy.k + 1)
    for n in range(start, n_max + 1):
        report, _ = estimate(cfg, policy, n, scheme, "open", reps, seed, workers)
        if report.csum_macro < eps * cfg.C:
            return n - 1
    return None
