"""FAP resource allocation policies, SIR targets and rate reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TDMA = "tdma"
CDMA = "cdma"
SCHEMES = (TDMA, CDMA)


@dataclass(frozen=True)
class AllocationPolicy:
    """Shares of FAP time/backhaul vs. number L of admitted cellular users.

    lam(l, n) is the home user's fraction and mu(l, n) the per-admitted-user
    fraction when the FAP serves l of n cellular users; k caps how many the
    FAP will admit. lam(0, n) must be 1 and mu(0, n) must be 0.
    """

    k: int
    lam: Callable[[int, int], float]
    mu: Callable[[int, int], float]
    name: str = "custom"

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")

    def materialize(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Concrete (lambda_L, mu_L) arrays for L = 0..k, validated."""
        if n < 1:
            raise ValueError("n must be >= 1")
        lams = np.array([self.lam(l, n) for l in range(self.k + 1)], dtype=float)
        mus = np.array([self.mu(l, n) for l in range(self.k + 1)], dtype=float)
        if lams[0] != 1.0 or mus[0] != 0.0:
            raise ValueError("lambda_0 must be 1 and mu_0 must be 0")
        if np.any(lams < 0.0) or np.any(lams > 1.0) or np.any(mus < 0.0) or np.any(mus > 1.0):
            raise ValueError("allocation fractions must lie in [0, 1]")
        ls = np.arange(self.k + 1)
        if np.any(lams + ls * mus > 1.0 + 1e-12):
            raise ValueError("lambda_L + L*mu_L must not exceed 1")
        if np.any(np.diff(lams) > 1e-12):
            raise ValueError("lambda_L must be nonincreasing in L")
        return lams, mus


def fair_policy(k: int) -> AllocationPolicy:
    """Reference allocation lambda_L = 1 - L/N, mu_L = 1/N."""
    return AllocationPolicy(
        k=k,
        lam=lambda l, n: 1.0 - l / n,
        mu=lambda l, n: 0.0 if l == 0 else 1.0 / n,
        name="fair",
    )


def fixed_lambda_policy(lam1: float, k: int) -> AllocationPolicy:
    """Constant home share lambda for L >= 1; admitted users split the rest."""
    if not 0.0 <= lam1 <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    return AllocationPolicy(
        k=k,
        lam=lambda l, n: 1.0 if l == 0 else lam1,
        mu=lambda l, n: 0.0 if l == 0 else (1.0 - lam1) / l,
        name=f"lambda={lam1:g}",
    )


def closed_policy() -> AllocationPolicy:
    """Closed access: the FAP admits nobody."""
    return AllocationPolicy(
        k=0, lam=lambda l, n: 1.0, mu=lambda l, n: 0.0, name="closed"
    )


@dataclass(frozen=True)
class SirTargets:
    """SIR thresholds when the FAP serves L cellular users."""

    gamma_f: float
    gamma_h: float
    gamma_c: float
    scheme: str


@dataclass
class RateReport:
    """Home-user ergodic rate and cellular sum throughput (bps/Hz).

    Standard errors are 0 for closed-form values. csum_macro is the part of
    csum earned by users still served at the macrocell BS; it is what the
    open-access cutoff detection looks at.
    """

    c0: float
    csum: float
    se_c0: float = 0.0
    se_csum: float = 0.0
    csum_macro: float | None = None
    se_csum_macro: float = 0.0
    meta: dict = field(default_factory=dict)
