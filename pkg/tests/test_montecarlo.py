import math

import numpy as np
import pytest

from femtocap.cdma import closed_access_cdma
from femtocap.model import InterferenceRealization, sample_realization
from femtocap.montecarlo import (
    estimate,
    find_open_cutoff,
    handoff,
    rates_cdma,
    rates_tdma,
)
from femtocap.policy import fair_policy, fixed_lambda_policy
from femtocap.tdma import closed_access_tdma, cutoff_closed_tdma, open_access_tdma_k1


def make_realization(factors, i0=2.025e7):
    factors = np.asarray(factors, dtype=float)
    perm = np.argsort(factors, kind="stable")
    return InterferenceRealization(factors=factors, ordered=factors[perm], perm=perm, i0=i0)


def test_handoff_no_outage_serves_nobody(cfg):
    real = make_realization([0.1, 0.2, 0.5, 1.0])  # all below P_f/(P_c*Gamma_f0) = 2.41
    for scheme in ("tdma", "cdma"):
        out = handoff(real, cfg, fair_policy(2), scheme)
        if scheme == "tdma":
            assert out.l == 0 and out.served_users == ()


def test_handoff_closed_policy_never_serves(cfg):
    real = make_realization([5.0, 8.0, 11.0])
    assert handoff(real, cfg, fair_policy(0), "tdma").l == 0


def test_handoff_single_loud_neighbor(cfg):
    # one dominating interferer, outage clears after the first admission
    real = make_realization([0.01, 0.02, 0.03, 1e6])
    out = handoff(real, cfg, fair_policy(2), "tdma")
    assert out.l == 1
    assert out.served_ranks == (3,)
    assert out.served_users == (3,)


def test_handoff_served_are_loudest(cfg):
    rng = np.random.default_rng(13)
    policy = fair_policy(3)
    for _ in range(50):
        real = sample_realization(30, cfg, rng)
        out = handoff(real, cfg, policy, "tdma")
        expected = tuple(int(real.perm[r]) for r in range(29, 29 - out.l, -1))
        assert out.served_users == expected


def test_handoff_rejects_k_not_below_n(cfg):
    real = make_realization([1.0, 2.0])
    with pytest.raises(ValueError):
        handoff(real, cfg, fair_policy(2), "tdma")


def test_rates_home_success_below_cap(cfg):
    # L < K means the handoff already cleared the home user's outage
    real = make_realization([0.01, 0.02, 0.03, 1e6])
    policy = fair_policy(2)
    out = handoff(real, cfg, policy, "tdma")
    rr = rates_tdma(real, out, cfg, policy, 4)
    assert out.l < policy.k
    assert rr.s_f == 1.0


def test_rates_two_users_single_slot(cfg):
    # N = 2, K = 1, forced handoff: the lone remaining user fills every slot
    real = make_realization([0.05, 1e5])
    policy = fair_policy(1)
    out = handoff(real, cfg, policy, "tdma")
    assert out.l == 1
    rr = rates_tdma(real, out, cfg, policy, 2)
    assert rr.s_f == 1.0  # the remaining factor clears the home target
    assert rr.s_h == 1.0


def test_rates_cdma_self_interference_ceiling(cfg):
    # K * Gamma_f,K >= 1 makes the home user fail regardless of interference
    tiny_g = cfg.replace(G=0.2)  # Gamma ~ 2.07 per served user
    real = make_realization([1e3, 1e4, 1e5])
    policy = fixed_lambda_policy(0.5, 2)
    out = handoff(real, tiny_g, policy, "cdma")
    assert out.l == policy.k
    rr = rates_cdma(real, out, tiny_g, policy, 3)
    assert rr.s_f == 0.0


def test_rates_reject_mismatched_sizes(cfg):
    real = make_realization([0.1, 0.2, 0.3])
    out = handoff(real, cfg, fair_policy(1), "tdma")
    with pytest.raises(ValueError):
        rates_tdma(real, out, cfg, fair_policy(1), 5)


@pytest.mark.parametrize("scheme,k", [("tdma", 0), ("tdma", 1), ("tdma", 3), ("cdma", 1), ("cdma", 2)])
def test_kernels_match_reference_path(cfg, scheme, k):
    from femtocap import kernels
    from femtocap.montecarlo import _cdma_params, _tdma_params

    n = 20
    policy = fair_policy(k)
    rng = np.random.default_rng(hash((scheme, k)) % 2**32)
    params = _tdma_params(cfg, policy, n) if scheme == "tdma" else _cdma_params(cfg, policy, n)
    rates_fn = rates_tdma if scheme == "tdma" else rates_cdma
    sim = kernels.simulate_tdma if scheme == "tdma" else kernels.simulate_cdma
    for _ in range(100):
        real = sample_realization(n, cfg, rng)
        out = handoff(real, cfg, policy, scheme)
        rr = rates_fn(real, out, cfg, policy, n)
        c0, csum, macro, l = sim(real.ordered.reshape(1, n), *params)
        assert l[0] == out.l
        assert c0[0] == pytest.approx(rr.c0, rel=1e-12, abs=1e-15)
        assert csum[0] == pytest.approx(rr.csum, rel=1e-12, abs=1e-15)
        assert macro[0] == pytest.approx(rr.csum_macro, rel=1e-12, abs=1e-15)


def test_estimate_deterministic_and_worker_invariant(cfg):
    a, ea = estimate(cfg, fair_policy(2), 15, "tdma", "open", 40_000, seed=99, workers=1)
    b, eb = estimate(cfg, fair_policy(2), 15, "tdma", "open", 40_000, seed=99, workers=8)
    assert (a.c0, a.csum, a.se_c0, a.se_csum, a.csum_macro) == (
        b.c0, b.csum, b.se_c0, b.se_csum, b.csum_macro
    )
    assert np.array_equal(ea.probs, eb.probs)


def test_estimate_event_distribution(cfg):
    _, events = estimate(cfg, fair_policy(3), 20, "tdma", "open", 20_000, seed=5)
    assert events.probs.shape == (4,)
    assert events.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(events.probs >= 0)


def test_estimate_closed_matches_tdma_theory(cfg):
    rep, _ = estimate(cfg, fair_policy(0), 25, "tdma", "closed", 200_000, seed=31)
    th = closed_access_tdma(cfg, 25)
    assert abs(rep.c0 - th.c0) <= 3 * rep.se_c0
    assert rep.csum == th.csum  # deterministic indicator


def test_estimate_closed_matches_cdma_theory(cfg):
    rep, _ = estimate(cfg, fair_policy(0), 50, "cdma", "closed", 200_000, seed=37)
    th = closed_access_cdma(cfg, 50, 200_000, np.random.default_rng(38))
    assert abs(rep.c0 - th.c0) <= 3 * math.hypot(rep.se_c0, th.se_c0)
    assert rep.csum == th.csum


def test_estimate_open_matches_theorem2(cfg):
    n = 15
    rep, _ = estimate(cfg, fair_policy(1), n, "tdma", "open", 200_000, seed=41)
    th = open_access_tdma_k1(cfg, fair_policy(1), n)
    assert abs(rep.c0 - th.c0) <= 3 * rep.se_c0
    assert abs(rep.csum - th.csum) <= 3 * rep.se_csum


def test_estimate_closed_access_forces_k0(cfg):
    a, _ = estimate(cfg, fair_policy(3), 20, "tdma", "closed", 10_000, seed=1)
    b, _ = estimate(cfg, fair_policy(0), 20, "tdma", "closed", 10_000, seed=1)
    assert a.c0 == b.c0 and a.csum == b.csum


def test_estimate_doubling_reps_is_stable(cfg):
    a, _ = estimate(cfg, fair_policy(1), 20, "tdma", "open", 50_000, seed=7)
    b, _ = estimate(cfg, fair_policy(1), 20, "tdma", "open", 100_000, seed=7)
    pooled = math.hypot(a.se_c0, b.se_c0)
    assert abs(a.c0 - b.c0) <= 6 * pooled


def test_estimate_rejects_bad_args(cfg):
    with pytest.raises(ValueError):
        estimate(cfg, fair_policy(1), 10, "fdma", "open", 1000, seed=0)
    with pytest.raises(ValueError):
        estimate(cfg, fair_policy(1), 10, "tdma", "ajar", 1000, seed=0)
    with pytest.raises(ValueError):
        estimate(cfg, fair_policy(10), 10, "tdma", "open", 1000, seed=0)


def test_find_open_cutoff_closed_policy_recovers_closed_cutoff(cfg):
    nc = cutoff_closed_tdma(cfg)
    got = find_open_cutoff(
        cfg, fair_policy(0), "tdma", reps=5_000, seed=3, n_start=nc - 2, n_max=nc + 5
    )
    assert got == nc


def test_find_open_cutoff_none_when_out_of_range(cfg):
    got = find_open_cutoff(cfg, fair_policy(1), "tdma", reps=2_000, seed=3, n_max=10)
    assert got is None
