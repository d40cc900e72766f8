"""Figure-level drivers: density sweeps, minimum-allocation searches,
backhaul sweeps, cutoff tables and the access-mode decision grid.

All outputs are plain row lists ready for CSV emission (see .runio);
reruns with the same spec and master seed reproduce them byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cdma import closed_access_cdma, cutoff_closed_cdma, home_rate_lower_bound_cdma
from .model import NetworkConfig
from .montecarlo import estimate, find_open_cutoff
from .policy import CDMA, TDMA, AllocationPolicy, fair_policy, fixed_lambda_policy
from .tdma import closed_access_tdma, cutoff_closed_tdma, open_access_tdma_k1, asymptotic_home_rate_tdma

DENSITY_HEADER = [
    "scheme", "access", "n", "k",
    "c0", "se_c0", "csum", "se_csum", "csum_macro", "se_csum_macro",
    "c0_cf", "csum_cf", "p_a",
]

LAMBDA_HEADER = ["scheme", "n", "lambda_star"]
BACKHAUL_HEADER = ["scheme", "n", "c_b", "lambda_star", "backhaul_floor"]
DECISION_HEADER = [
    "scheme", "regime", "n", "n_c_star", "n_o_star",
    "owner", "owner_basis", "operator", "operator_basis",
]


@dataclass(frozen=True)
class SweepSpec:
    """Parameters of one experiment sweep."""

    scheme: str
    access: tuple[str, ...] = ("open", "closed")
    n_values: tuple[int, ...] = ()
    k_values: tuple[int, ...] = (1,)
    lambda_grid: tuple[float, ...] = ()
    cb_values: tuple[float, ...] = ()
    reps: int = 100_000
    seed: int = 12345
    workers: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.scheme not in (TDMA, CDMA):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.access:
            raise ValueError("need at least one access mode")
        if self.reps < 1000:
            raise ValueError("reps must be >= 1000")


def _fmt_pa(probs: np.ndarray) -> str:
    return ";".join(f"{p:.9g}" for p in probs)


def sweep_density(spec: SweepSpec, cfg: NetworkConfig, policy_for=None) -> list[list]:
    """One row per (N, K, access): Monte Carlo rates, event distribution,
    and closed forms where they exist (closed access; open TDMA K = 1).

    policy_for maps K to an AllocationPolicy (default: the fair policy).
    """
    if not spec.n_values:
        raise ValueError("empty N range")
    if policy_for is None:
        policy_for = fair_policy
    rows = []
    for n in spec.n_values:
        for k in spec.k_values:
            for access in spec.access:
                policy = policy_for(k)
                rep, ev = estimate(
                    cfg, policy, n, spec.scheme, access, spec.reps, spec.seed,
                    workers=spec.workers,
                )
                c0_cf = csum_cf = ""
                if access == "closed":
                    cf = (
                        closed_access_tdma(cfg, n)
                        if spec.scheme == TDMA
                        else closed_access_cdma(
                            cfg, n, spec.reps, np.random.default_rng((spec.seed, n))
                        )
                    )
                    c0_cf, csum_cf = cf.c0, cf.csum
                elif spec.scheme == TDMA and k == 1 and n >= 2:
                    cf = open_access_tdma_k1(cfg, policy, n)
                    c0_cf, csum_cf = cf.c0, cf.csum
                rows.append([
                    spec.scheme, access, n, k,
                    rep.c0, rep.se_c0, rep.csum, rep.se_csum,
                    rep.csum_macro, rep.se_csum_macro,
                    c0_cf, csum_cf, _fmt_pa(ev.probs),
                ])
    return rows


def lambda_star(
    cfg: NetworkConfig,
    n: int,
    scheme: str,
    reps: int = 50_000,
    seed: int = 12345,
    grid_step: float = 0.01,
    refine_tol: float = 1e-3,
    workers: int = 1,
) -> float | None:
    """Minimum home-user share lambda_1 (K = 1) making open access worthwhile.

    TDMA: smallest lambda with open-access home rate >= the closed-access
    rate, from the exact K = 1 closed forms. CDMA: open access beats closed
    for every allocation (home-rate dominance), so the binding question is
    when the allocation stops limiting the home user; all evaluations share
    one replication stream, making the rate bit-identical to the lambda = 1
    rate exactly where lambda*C_b >= C, and the smallest such lambda is
    returned. Grid search followed by bisection between the bracketing grid
    points. Returns None when no grid point qualifies.
    """
    if not 0.0 < grid_step <= 0.05:
        raise ValueError("grid_step must lie in (0, 0.05]")

    if scheme == TDMA:
        target = closed_access_tdma(cfg, n).c0

        def qualifies(lam: float) -> bool:
            return open_access_tdma_k1(cfg, fixed_lambda_policy(lam, 1), n).c0 >= target

    elif scheme == CDMA:
        ref, _ = estimate(
            cfg, fixed_lambda_policy(1.0, 1), n, CDMA, "open", reps, seed,
            workers=workers,
        )
        tol = 1e-12 * max(1.0, abs(ref.c0))

        def qualifies(lam: float) -> bool:
            rep, _ = estimate(
                cfg, fixed_lambda_policy(lam, 1), n, CDMA, "open", reps, seed,
                workers=workers,
            )
            return abs(rep.c0 - ref.c0) <= tol

    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    grid = np.arange(grid_step, 1.0 + 1e-12, grid_step)
    prev = None
    hit = None
    for lam in grid:
        if qualifies(lam):
            hit = lam
            break
        prev = lam
    if hit is None:
        return None
    if prev is None:
        return float(hit)
    lo, hi = float(prev), float(hit)
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        if qualifies(mid):
            hi = mid
        else:
            lo = mid
    return hi


def lambda_star_vs_backhaul(
    cfg: NetworkConfig,
    n: int,
    scheme: str,
    cb_values,
    reps: int = 50_000,
    seed: int = 12345,
    grid_step: float = 0.01,
    workers: int = 1,
) -> list[list]:
    """lambda_star per backhaul capacity, with the lambda*C_b = C reference."""
    if any(cb <= 0.0 for cb in cb_values):
        raise ValueError("C_b values must be positive")
    rows = []
    for cb in cb_values:
        c = cfg.replace(C_b=cb)
        star = lambda_star(c, n, scheme, reps=reps, seed=seed, grid_step=grid_step, workers=workers)
        rows.append([scheme, n, cb, "" if star is None else star, min(1.0, cfg.C / cb)])
    return rows


def _band_choice(a: float, b: float, se: float, rel_band: float = 0.02) -> str:
    """'a', 'b', or 'indifferent' comparing two rates with noise and a
    relative dead band (the larger is preferred only when it clears both)."""
    diff = a - b
    scale = max(abs(a), abs(b), 1e-12)
    if abs(diff) <= max(2.0 * se, rel_band * scale):
        return "indifferent"
    return "a" if diff > 0 else "b"


def decision_table(
    cfg: NetworkConfig,
    reps: int = 20_000,
    seed: int = 12345,
    workers: int = 1,
) -> list[list]:
    """Preferred access mode of each party per density regime, both schemes.

    Regimes come from the computed cutoffs (low < N_c*, medium in
    (N_c*, N_o*], high > N_o*), each evaluated at a representative N. The
    operator compares macrocell-side sum throughput (the post-cutoff
    residual belongs to the FAP-served users). The owner compares home
    rates; at high TDMA density the comparison is the large-N limit with
    the allocation frozen (an allocation cannot track unbounded density),
    and in CDMA a within-noise comparison falls back to the home-rate
    dominance bound, which holds for every N and allocation. K follows the
    reference scenarios: 3 for TDMA, 1 for CDMA.
    """
    rows = []
    for scheme, k in ((TDMA, 3), (CDMA, 1)):
        policy = fair_policy(k)
        nc = cutoff_closed_tdma(cfg) if scheme == TDMA else cutoff_closed_cdma(cfg)
        no = find_open_cutoff(
            cfg, policy, scheme, reps=reps, seed=seed, workers=workers,
            n_start=max(2, nc - 2), n_max=nc + k + 10,
        )
        if no is None:
            raise RuntimeError(f"no open-access cutoff found for {scheme}")
        n_low = max(k + 2, round(0.4 * nc))
        n_med = nc + max(1, (no - nc) // 2)
        n_high = no + max(10, nc // 5)

        for regime, n in (("low", n_low), ("medium", n_med), ("high", n_high)):
            open_rep, _ = estimate(cfg, policy, n, scheme, "open", reps, seed, workers=workers)
            if scheme == TDMA:
                closed_rep = closed_access_tdma(cfg, n)
            else:
                closed_rep = closed_access_cdma(cfg, n, reps, np.random.default_rng((seed, n)))

            if scheme == TDMA and regime == "high":
                lam1 = policy.lam(1, n)
                closed_lim, open_lim = asymptotic_home_rate_tdma(cfg, lam1)
                if abs(open_lim - closed_lim) < 1e-12:
                    owner, owner_basis = "indifferent", "asymptote"
                else:
                    owner = "open" if open_lim > closed_lim else "closed"
                    owner_basis = "asymptote"
            else:
                se = math.hypot(open_rep.se_c0, closed_rep.se_c0)
                pick = _band_choice(open_rep.c0, closed_rep.c0, se)
                owner = {"a": "open", "b": "closed"}.get(pick, "indifferent")
                owner_basis = "mc"
                if scheme == CDMA and owner == "indifferent":
                    # home-rate dominance holds for every N and allocation;
                    # sanity-check the bound before leaning on it
                    bound = home_rate_lower_bound_cdma(
                        cfg, policy, n, reps, np.random.default_rng((seed, n, 1))
                    )
                    if bound.value >= closed_rep.c0 - 3.0 * math.hypot(bound.se, closed_rep.se_c0):
                        owner, owner_basis = "open", "dominance-bound"

            se_m = math.hypot(open_rep.se_csum_macro, closed_rep.se_csum)
            pick = _band_choice(open_rep.csum_macro, closed_rep.csum_macro, se_m)
            operator = {"a": "open", "b": "closed"}.get(pick, "indifferent")

            rows.append([
                scheme, regime, n, nc, no, owner, owner_basis, operator, "macro-mc",
            ])
    return rows
