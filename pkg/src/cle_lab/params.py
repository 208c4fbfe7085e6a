"""Closed-form parameter algebra for the kappa/rho/beta family.

Every relation used by the samplers lives here as an exact function, so the
simulation layers never re-derive constants.  Relations that are conjectural
(announced rather than proved) carry ``provenance="conjectured"`` so reports
can separate proved identities from statistical targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ProcessParams",
    "Constants",
    "Admissibility",
    "PROVENANCE",
    "bessel_dimension",
    "companion_rho",
    "dual_kappa",
    "bcle_admissible",
    "nested_rhos_kp",
    "nested_rhos_k",
    "beta_to_rho",
    "rho_to_beta",
    "cluster_color_prob",
    "fk_q",
    "dimensions",
    "gff_constants",
    "bubble_exponent",
]

# relation name -> how it is known
PROVENANCE = {
    "bessel_dimension": "closed-form",
    "companion_rho": "closed-form",
    "bcle_admissible": "closed-form",
    "nested_rhos_kp": "closed-form",
    "nested_rhos_k": "closed-form",
    "beta_to_rho": "conjectured",
    "rho_to_beta": "conjectured",
    "cluster_color_prob": "conjectured",
    "fk_q": "conjectured",
    "dimensions": "closed-form",
    "gff_constants": "closed-form",
    "bubble_exponent": "closed-form",
}

BISECTION_TOL = 1e-12


def bessel_dimension(kappa: float, rho: float) -> float:
    """delta = 1 + 2(rho+2)/kappa, the Bessel dimension driving SLE_kappa(rho)."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return 1.0 + 2.0 * (rho + 2.0) / kappa


def companion_rho(kappa: float, rho: float) -> float:
    """Weight seen from the swapped target: kappa - 6 - rho (an involution)."""
    return kappa - 6.0 - rho


def dual_kappa(kappa: float) -> float:
    """kappa' = 16/kappa."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return 16.0 / kappa


def classify_regime(kappa: float, rho: float) -> str:
    """Regime of the (kappa, rho) pair.

    classical: rho > -2.  generalized-trunk: -2-kappa/2 < rho < kappa/2-4 and
    rho <= -2 (loop-forming, supported).  light-cone: kappa < 4 and
    kappa/2-4 < rho < -2 (unsupported here).  boundary-case: rho equal to
    -2, kappa/2-4 or -2-kappa/2 exactly.
    """
    lo = -2.0 - kappa / 2.0
    crit = kappa / 2.0 - 4.0
    if rho > -2.0:
        return "classical"
    if rho in (-2.0, lo) or (rho == crit and kappa < 4.0):
        return "boundary-case"
    if rho < lo:
        raise ValueError(f"rho={rho} below the Bessel floor -2-kappa/2={lo}")
    if rho < crit:
        return "generalized-trunk"
    return "light-cone"


@dataclass(frozen=True)
class ProcessParams:
    """Parameter bundle (kappa, rho, beta, mu) with derived quantities."""

    kappa: float
    rho: float
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.kappa <= 8.0:
            raise ValueError(f"kappa must lie in (0, 8], got {self.kappa}")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")
        if self.rho <= -2.0 - self.kappa / 2.0:
            raise ValueError(
                f"rho={self.rho} at or below -2-kappa/2; no Bessel dimension > 0"
            )
        if self.mu != 0.0 and self.rho != -2.0:
            raise ValueError("mu is only meaningful at rho = -2")

    @property
    def delta(self) -> float:
        return bessel_dimension(self.kappa, self.rho)

    @property
    def regime(self) -> str:
        return classify_regime(self.kappa, self.rho)

    def as_dict(self) -> dict:
        adm = None
        if 2.0 < self.kappa < 8.0:
            a = bcle_admissible(self.kappa, self.rho)
            adm = {"admissible": a.admissible, "boundary_case": a.boundary_case}
        return {
            "kappa": self.kappa,
            "rho": self.rho,
            "beta": self.beta,
            "mu": self.mu,
            "delta": self.delta,
            "regime": self.regime,
            "dual_kappa": dual_kappa(self.kappa),
            "companion_rho": companion_rho(self.kappa, self.rho),
            "bcle": adm,
        }


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    # None for interior/inadmissible; otherwise which degenerate ensemble
    boundary_case: str | None = None


def bcle_admissible(kappa: float, rho: float) -> Admissibility:
    """Whether (kappa, rho) defines a boundary loop ensemble.

    kappa in (2,4]: rho in [-2, kappa-4]; kappa in (4,8): rho in
    [kappa/2-4, kappa/2-2].  Exact endpoints are accepted and tagged
    degenerate (single boundary-tracing loop) rather than rejected.
    """
    if not 2.0 < kappa < 8.0:
        raise ValueError(f"kappa must lie in (2, 8), got {kappa}")
    if kappa <= 4.0:
        lo, hi = -2.0, kappa - 4.0
    else:
        lo, hi = kappa / 2.0 - 4.0, kappa / 2.0 - 2.0
    if rho == lo:
        return Admissibility(True, "single-true-loop")
    if rho == hi:
        return Admissibility(True, "single-false-loop")
    return Admissibility(lo < rho < hi, None)


def nested_rhos_kp(kappa_prime: float, rho: float, strict: bool = True):
    """Inner weights (rho_L', rho_R') to nest inside a kappa = 16/kappa' ensemble.

    rho_R' = -(kappa'/4)(rho+2), rho_L' = kappa'/2 - 4 - rho_R'.  With
    strict=True, rho outside [-2, kappa-4] raises; strict=False computes the
    arithmetic anyway so callers can cross-check admissibility flags.
    """
    if not 4.0 < kappa_prime < 8.0:
        raise ValueError(f"kappa' must lie in (4, 8), got {kappa_prime}")
    kappa = dual_kappa(kappa_prime)
    if strict and not -2.0 <= rho <= kappa - 4.0:
        raise ValueError(
            f"rho={rho} outside the admissible interval [-2, {kappa - 4.0}]"
        )
    rho_r = -(kappa_prime / 4.0) * (rho + 2.0)
    rho_l = kappa_prime / 2.0 - 4.0 - rho_r
    return rho_l, rho_r


def nested_rhos_k(kappa: float, rho_prime: float, strict: bool = True):
    """Inner weights (rho_L, rho_R) to nest inside a kappa' = 16/kappa ensemble.

    rho_R = -(kappa/4)(rho'+2), rho_L = kappa/2 - 4 - rho_R, for
    rho' in [kappa'-6, 0].
    """
    if not 2.0 < kappa < 4.0:
        raise ValueError(f"kappa must lie in (2, 4), got {kappa}")
    kappa_prime = dual_kappa(kappa)
    if strict and not kappa_prime - 6.0 <= rho_prime <= 0.0:
        raise ValueError(
            f"rho'={rho_prime} outside [{kappa_prime - 6.0}, 0]"
        )
    rho_r = -(kappa / 4.0) * (rho_prime + 2.0)
    rho_l = kappa / 2.0 - 4.0 - rho_r
    return rho_l, rho_r


def rho_to_beta(rho: float, kappa_prime: float) -> float:
    """Coin bias beta for a given trunk weight rho (conjectured relation).

    (1-beta)/2 = sin(pi rho/2) / (sin(pi rho/2) - sin(pi (kappa-rho)/2)),
    kappa = 16/kappa'.  Endpoints are exact: rho=-2 -> beta=1,
    rho=kappa-4 -> beta=-1.
    """
    if not 4.0 < kappa_prime < 8.0:
        raise ValueError(f"kappa' must lie in (4, 8), got {kappa_prime}")
    kappa = dual_kappa(kappa_prime)
    if not -2.0 <= rho <= kappa - 4.0:
        raise ValueError(f"rho={rho} outside [-2, {kappa - 4.0}]")
    if rho == -2.0:
        return 1.0
    if rho == kappa - 4.0:
        return -1.0
    s1 = math.sin(math.pi * rho / 2.0)
    s2 = math.sin(math.pi * (kappa - rho) / 2.0)
    return 1.0 - 2.0 * s1 / (s1 - s2)


def beta_to_rho(beta: float, kappa_prime: float) -> float:
    """Trunk weight rho(beta, kappa') by monotone bisection of rho_to_beta.

    Unique solution in [-2, kappa-4]; bisection to 1e-12 (the map is a
    decreasing bijection from [-1,1] onto [-2, kappa-4]).
    """
    if not -1.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [-1, 1], got {beta}")
    if not 4.0 < kappa_prime < 8.0:
        raise ValueError(f"kappa' must lie in (4, 8), got {kappa_prime}")
    kappa = dual_kappa(kappa_prime)
    if beta == 1.0:
        return -2.0
    if beta == -1.0:
        return kappa - 4.0
    lo, hi = -2.0, kappa - 4.0  # beta(lo)=1, beta(hi)=-1, decreasing
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= BISECTION_TOL:
            break
        if rho_to_beta(mid, kappa_prime) > beta:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(rho_to_beta(root, kappa_prime) - beta) > 1e-9:
        raise RuntimeError("bisection failed to bracket the coin-bias relation")
    return root


def cluster_color_prob(kappa_prime: float) -> float:
    """p(kappa') = 1/(4 cos^2(pi kappa/4)), kappa = 16/kappa' (conjectured)."""
    if not 4.0 < kappa_prime < 6.0:
        raise ValueError(f"kappa' must lie in (4, 6), got {kappa_prime}")
    kappa = dual_kappa(kappa_prime)
    return 1.0 / (4.0 * math.cos(math.pi * kappa / 4.0) ** 2)


def fk_q(kappa_prime: float) -> float:
    """Cluster weight q = 4 cos^2(4 pi / kappa') (conjectured)."""
    if not 4.0 <= kappa_prime <= 8.0:
        raise ValueError(f"kappa' must lie in [4, 8], got {kappa_prime}")
    return 4.0 * math.cos(4.0 * math.pi / kappa_prime) ** 2


def dimensions(kappa: float):
    """(trace dimension, carpet/gasket dimension) = (1+kappa/8, 1+2/kappa+3kappa/32)."""
    if not 0.0 < kappa <= 8.0:
        raise ValueError(f"kappa must lie in (0, 8], got {kappa}")
    trace = 1.0 + kappa / 8.0
    carpet = None
    if 8.0 / 3.0 <= kappa <= 8.0:
        carpet = 1.0 + 2.0 / kappa + 3.0 * kappa / 32.0
    return trace, carpet


@dataclass(frozen=True)
class Constants:
    lam: float
    lam_prime: float
    chi: float


def gff_constants(kappa: float) -> Constants:
    """lambda = pi/sqrt(kappa), lambda' = pi/sqrt(16/kappa), chi = 2/sqrt(k)-sqrt(k)/2."""
    if not 0.0 < kappa <= 4.0:
        raise ValueError(f"kappa must lie in (0, 4], got {kappa}")
    sk = math.sqrt(kappa)
    return Constants(
        lam=math.pi / sk,
        lam_prime=math.pi / math.sqrt(16.0 / kappa),
        chi=2.0 / sk - sk / 2.0,
    )


def bubble_exponent(kappa: float):
    """Scaling exponent b = 8/kappa - 1 of the boundary bubble measure.

    Returns (b, constructible): the Poisson composition of bubbles produces
    a boundary process exactly when b is in (0, 1).
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    b = 8.0 / kappa - 1.0
    return b, 0.0 < b < 1.0
