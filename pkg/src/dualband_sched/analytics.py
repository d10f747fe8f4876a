"""Outage metrics and the Poisson approximation of the per-slot count of
mmW successes, with its total-variation error bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .model import UserApp, qos_indicator


@dataclass
class OutageStats:
    """Per-run outage bookkeeping: per-slot satisfied counts on each band,
    the sizes of the due class, and the final outage ratio."""

    sat_uw: list[int] = field(default_factory=list)
    sat_mmw: list[int] = field(default_factory=list)
    due_counts: list[int] = field(default_factory=list)
    p_out: float = 0.0

    def validate(self) -> None:
        if not 0.0 <= self.p_out <= 1.0:
            raise ValueError(f"outage ratio {self.p_out} outside [0, 1]")
        for s1, s2, n in zip(self.sat_uw, self.sat_mmw, self.due_counts):
            if s1 + s2 > n:
                raise ValueError("satisfied counts exceed the due-class size")


def outage_probability(apps: list[UserApp]) -> float:
    """Fraction of applications that missed their deadline: one minus the
    satisfied count over the population size."""
    if not apps:
        raise ValueError("empty population: no applications to evaluate")
    satisfied = sum(qos_indicator(app) for app in apps)
    return 1.0 - satisfied / len(apps)


def poisson_cdf(k: int, lam: float) -> float:
    """P(N <= k) for N ~ Poisson(lam), via the regularized upper incomplete
    gamma identity (avoids factorial overflow for large k)."""
    if k < 0:
        return 0.0
    return float(special.gammaincc(k + 1, lam))


def poisson_outage_cdf(p_th: float, n_due: int, satisfied_uw: int,
                       rhos: list[float]) -> float:
    """Approximate CDF of the slot outage ratio, evaluated at ``p_th``.

    The count of mmW successes is a sum of independent Bernoulli links, so it
    is approximately Poisson with mean equal to the summed LoS probabilities.
    The outage ratio stays at or below ``p_th`` exactly when enough of the
    scheduled mmW links come up unblocked, hence the value is one minus the
    Poisson CDF at floor((1 - p_th) * n_due - satisfied_uw). Valid for
    0 <= p_th < 1 - satisfied_uw / n_due.
    """
    if n_due <= 0:
        raise ValueError("empty due class")
    limit = 1.0 - satisfied_uw / n_due
    if not 0.0 <= p_th < limit:
        raise ValueError(
            f"outage threshold {p_th} outside the valid range [0, {limit})"
        )
    lam = float(sum(rhos))
    k = math.floor((1.0 - p_th) * n_due - satisfied_uw)
    return 1.0 - poisson_cdf(k, lam)


def lecam_bound(rhos: list[float]) -> float:
    """Total-variation (L1) bound on the Poisson approximation error of a sum
    of independent Bernoulli variables: twice the sum of squared success
    probabilities."""
    return 2.0 * float(sum(r * r for r in rhos))


def poisson_binomial_pmf(rhos: list[float]) -> np.ndarray:
    """Exact law of the number of successes among independent Bernoulli
    trials, by convolving the probability generating function."""
    pmf = np.array([1.0])
    for p in rhos:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    return pmf


def poisson_pmf(ks: np.ndarray, lam: float) -> np.ndarray:
    ks = np.asarray(ks)
    if lam == 0.0:
        return np.where(ks == 0, 1.0, 0.0)
    log_pmf = ks * math.log(lam) - lam - special.gammaln(ks + 1)
    return np.exp(log_pmf)


def l1_poisson_gap(rhos: list[float]) -> float:
    """L1 distance between the exact success-count law and the Poisson law
    with the same mean, including the Poisson tail beyond the support."""
    exact = poisson_binomial_pmf(rhos)
    lam = float(sum(rhos))
    n = len(exact) - 1
    approx = poisson_pmf(np.arange(n + 1), lam)
    tail = 1.0 - poisson_cdf(n, lam)
    return float(np.sum(np.abs(exact - approx)) + tail)
