import numpy as np
import pytest

from femtocap.model import (
    DegeneratePlacementError,
    NetworkConfig,
    Position,
    factors_from_polar,
    home_interference_factor,
    interference_factor,
    sample_factors,
    sample_positions,
    sample_realization,
)


def test_config_invariants():
    with pytest.raises(ValueError):
        NetworkConfig(d=200.0)  # d > D
    with pytest.raises(ValueError):
        NetworkConfig(D=400.0)  # D > R
    with pytest.raises(ValueError):
        NetworkConfig(alpha=2.0, beta=3.0)  # wall loss inverted
    with pytest.raises(ValueError):
        NetworkConfig(P_f=0.0)


def test_config_file_roundtrip(tmp_path, cfg):
    path = tmp_path / "net.cfg"
    cfg.replace(R=350.0, G=128.0).to_file(path)
    loaded = NetworkConfig.from_file(path)
    assert loaded.R == 350.0 and loaded.G == 128.0 and loaded.d == cfg.d


def test_config_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "net.cfg"
    path.write_text("R = 300\nbogus = 1\n")
    with pytest.raises(ValueError, match="bogus"):
        NetworkConfig.from_file(path)


def test_interference_factor_midpoint(cfg):
    # equidistant from both base stations
    assert interference_factor(Position(cfg.D / 2, 0.0), cfg) == pytest.approx(1.0)


def test_interference_factor_equidistant_pythagorean(cfg):
    # 75^2 + 100^2 = 125^2 on both links
    assert interference_factor(Position(75.0, 100.0), cfg) == pytest.approx(1.0, rel=1e-12)


def test_interference_factor_vanishes_at_macro_bs(cfg):
    assert interference_factor(Position(1e-6, 0.0), cfg) < 1e-30


def test_interference_factor_reflection_symmetry(cfg):
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = rng.uniform(-200, 200)
        y = rng.uniform(0, 200)
        if x * x + y * y > cfg.R**2:
            continue
        assert interference_factor(Position(x, y), cfg) == interference_factor(
            Position(x, -y), cfg
        )


def test_interference_factor_degenerate_placement(cfg):
    with pytest.raises(DegeneratePlacementError):
        interference_factor(Position(cfg.D, 0.0), cfg)


def test_interference_factor_outside_disk_rejected(cfg):
    with pytest.raises(ValueError):
        interference_factor(Position(cfg.R + 1.0, 0.0), cfg)


def test_home_interference_factor_reference_value(cfg):
    # 150^4 / 5^2
    assert home_interference_factor(cfg) == pytest.approx(2.025e7, rel=1e-12)


def test_home_interference_factor_degenerate_symmetry():
    cfg = NetworkConfig(d=100.0, D=100.0 + 1e-9, alpha=3.0, beta=3.0 - 1e-12)
    assert home_interference_factor(cfg) == pytest.approx(1.0, rel=1e-6)


def test_home_interference_factor_power_law(cfg):
    # beta = 2: doubling d divides I_0 by 4
    assert home_interference_factor(cfg) / home_interference_factor(
        cfg.replace(d=2 * cfg.d)
    ) == pytest.approx(4.0, rel=1e-12)


def test_sample_realization_single_user(cfg):
    real = sample_realization(1, cfg, np.random.default_rng(0))
    assert real.ordered.shape == (1,)
    assert real.ordered[0] == real.factors[0]


def test_sample_realization_deterministic(cfg):
    a = sample_realization(100, cfg, np.random.default_rng(42))
    b = sample_realization(100, cfg, np.random.default_rng(42))
    assert np.array_equal(a.factors, b.factors)
    assert np.array_equal(a.perm, b.perm)


def test_sample_realization_ordering(cfg):
    real = sample_realization(200, cfg, np.random.default_rng(1))
    assert np.all(np.diff(real.ordered) >= 0)
    assert np.array_equal(real.factors[real.perm], real.ordered)
    assert np.all(real.factors >= 0)


def test_home_user_dominates_every_drop(cfg):
    # placement conditions on the home user being the strongest interferer
    rng = np.random.default_rng(5)
    for _ in range(50):
        real = sample_realization(300, cfg, rng)
        assert real.i0 >= real.ordered[-1]


def test_radial_uniformity():
    cfg = NetworkConfig()
    rng = np.random.default_rng(11)
    radii, _ = sample_positions(1_000_000, cfg, rng)
    sorted_r = np.sort(radii) / cfg.R
    ks = np.max(
        np.abs(sorted_r**2 - np.arange(1, sorted_r.size + 1) / sorted_r.size)
    )
    assert ks <= 0.002


def test_empirical_cdf_matches_analytic(cfg):
    from femtocap.analytic import cdf_interference

    rng = np.random.default_rng(21)
    factors = sample_factors(1_000_000, cfg, rng)
    p_hat = float(np.mean(factors <= 1.0))
    p = cdf_interference(1.0, cfg)
    se = np.sqrt(p * (1 - p) / factors.size)
    assert abs(p_hat - p) <= 3 * se


def test_factors_from_polar_matches_scalar(cfg):
    rng = np.random.default_rng(8)
    radii, angles = sample_positions(200, cfg, rng)
    batch = factors_from_polar(radii, angles, cfg)
    for r, a, f in zip(radii[:20], angles[:20], batch[:20]):
        p = Position(r * np.cos(a), r * np.sin(a))
        assert interference_factor(p, cfg) == pytest.approx(f, rel=1e-9)
