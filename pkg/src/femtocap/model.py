"""Network geometry, channel model and random user placement.

Macrocell BS at the origin, FAP at (D, 0), N cellular users uniform on the
disk of radius R. A user's interference factor is the ratio of its channel
gain to the FAP over its gain to the macrocell BS; under per-tier power
control it fixes the cross-tier interference the user creates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

# Points closer than this to either base station are treated as degenerate
# placements and resampled (measure zero, but they would produce infinities).
DEGENERATE_DISTANCE = 1e-9


class DegeneratePlacementError(ValueError):
    """User placed (numerically) on top of a base station."""


@dataclass(frozen=True)
class NetworkConfig:
    """Physical and protocol parameters of the two-tier network.

    R, D, d are in meters; P_f, P_c are normalized receive powers; C and C_b
    are bps/Hz. alpha is the outdoor/cross-wall path-loss exponent, beta the
    indoor one (alpha > beta encodes wall penetration loss).
    """

    R: float = 300.0
    D: float = 150.0
    d: float = 5.0
    alpha: float = 4.0
    beta: float = 2.0
    P_f: float = 1.0
    P_c: float = 1.0
    G: float = 64.0
    C: float = 0.5
    C_b: float = 2.0

    def __post_init__(self):
        if not (0.0 < self.d < self.D < self.R):
            raise ValueError(f"need 0 < d < D < R, got d={self.d}, D={self.D}, R={self.R}")
        if not (self.alpha > self.beta > 0.0):
            raise ValueError(f"need alpha > beta > 0, got alpha={self.alpha}, beta={self.beta}")
        for name in ("P_f", "P_c", "G", "C", "C_b"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_file(cls, path) -> "NetworkConfig":
        """Read a flat ``key = value`` config file (one pair per line)."""
        values = {}
        names = {f.name for f in fields(cls)}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, _, raw = line.partition("=")
                key = key.strip()
                if key not in names:
                    raise ValueError(f"{path}:{lineno}: unknown parameter {key!r}")
                values[key] = float(raw.strip())
        return cls(**values)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for f in fields(self):
                fh.write(f"{f.name} = {getattr(self, f.name)!r}\n")

    def replace(self, **kwargs) -> "NetworkConfig":
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(kwargs)
        return NetworkConfig(**current)


@dataclass(frozen=True)
class Position:
    """Cartesian user position; BS at origin, FAP at (D, 0)."""

    x: float
    y: float


@dataclass(frozen=True)
class InterferenceRealization:
    """One sampled drop of N cellular users.

    ordered holds the interference factors sorted ascending, perm maps the
    rank k (0-based) back to the original user index: ordered[k] ==
    factors[perm[k]]. i0 is the home user's (deterministic) factor.
    """

    factors: np.ndarray
    ordered: np.ndarray
    perm: np.ndarray
    i0: float

    @property
    def n(self) -> int:
        return self.factors.size


def home_interference_factor(cfg: NetworkConfig) -> float:
    """Interference factor of the home user, I_0 = d^(-beta) / D^(-alpha).

    Indoor exponent beta on the d-meter link to the FAP; cross-wall exponent
    alpha on the link to the macrocell BS, whose length is approximated by D
    (d << D, so the home user sits at the FAP for that link).
    """
    return cfg.D**cfg.alpha / cfg.d**cfg.beta


def interference_factor(p: Position, cfg: NetworkConfig) -> float:
    """Interference factor of a cellular user at p: (dist to BS / dist to FAP)^alpha.

    Both links are outdoor/cross-wall, hence the single exponent alpha.
    """
    dist_bs = math.hypot(p.x, p.y)
    if dist_bs > cfg.R * (1.0 + 1e-12):
        raise ValueError(f"position ({p.x}, {p.y}) outside the macrocell disk")
    dist_fap = math.hypot(p.x - cfg.D, p.y)
    if dist_fap < DEGENERATE_DISTANCE or dist_bs < DEGENERATE_DISTANCE:
        raise DegeneratePlacementError(
            f"user within {DEGENERATE_DISTANCE} m of a base station"
        )
    return (dist_bs / dist_fap) ** cfg.alpha


def sample_positions(n: int, cfg: NetworkConfig, rng: np.random.Generator):
    """n i.i.d. uniform points on the disk, as (radii, angles) polar arrays.

    Exact rejection-free sampling: radius R*sqrt(U). Points landing within
    DEGENERATE_DISTANCE of either base station are redrawn.
    """
    u = rng.random((n, 2))
    radii = cfg.R * np.sqrt(u[:, 0])
    angles = 2.0 * np.pi * u[:, 1]
    while True:
        dist_fap_sq = radii * radii - 2.0 * cfg.D * radii * np.cos(angles) + cfg.D * cfg.D
        bad = (dist_fap_sq < DEGENERATE_DISTANCE**2) | (radii < DEGENERATE_DISTANCE)
        if not bad.any():
            return radii, angles
        k = int(bad.sum())
        u = rng.random((k, 2))
        radii[bad] = cfg.R * np.sqrt(u[:, 0])
        angles[bad] = 2.0 * np.pi * u[:, 1]


def factors_from_polar(radii, angles, cfg: NetworkConfig) -> np.ndarray:
    """Interference factors for users at polar positions (radius = dist to BS)."""
    dist_fap_sq = radii * radii - 2.0 * cfg.D * radii * np.cos(angles) + cfg.D * cfg.D
    ratio = radii * radii / dist_fap_sq
    half = 0.5 * cfg.alpha
    if half == 2.0:  # libm pow dominates sampling otherwise
        return ratio * ratio
    return ratio**half


def sample_factors(n: int, cfg: NetworkConfig, rng: np.random.Generator) -> np.ndarray:
    """Interference factors of n users placed per the network model.

    The home user is assumed to dominate every cellular interferer
    (I_j <= I_0); drops violating that, possible because the factor
    distribution is heavy-tailed near the FAP, are resampled like
    degenerate placements. Under reference parameters this conditions away
    about 6e-5 of the placement mass per user.
    """
    i0 = home_interference_factor(cfg)
    radii, angles = sample_positions(n, cfg, rng)
    factors = factors_from_polar(radii, angles, cfg)
    while True:
        bad = factors > i0
        if not bad.any():
            return factors
        k = int(bad.sum())
        radii, angles = sample_positions(k, cfg, rng)
        factors[bad] = factors_from_polar(radii, angles, cfg)


def sample_realization(
    n: int, cfg: NetworkConfig, rng: np.random.Generator
) -> InterferenceRealization:
    """Sample one drop of n users and attach ordered statistics and I_0."""
    if n < 1:
        raise ValueError("need at least one cellular user")
    factors = sample_factors(n, cfg, rng)
    perm = np.argsort(factors, kind="stable")
    return InterferenceRealization(
        factors=factors,
        ordered=factors[perm],
        perm=perm,
        i0=home_interference_factor(cfg),
    )
