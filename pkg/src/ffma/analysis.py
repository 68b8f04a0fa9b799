"""Analytic reporting utilities: finite-blocklength rate and gain figures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm


@dataclass(frozen=True)
class FblParams:
    """Operating point for the finite-blocklength rate bound."""

    p: float
    blocklength: int
    epsilon: float

    def __post_init__(self) -> None:
        if self.p <= 0:
            raise ValueError("SNR p must be positive")
        if self.blocklength < 1:
            raise ValueError("blocklength must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def gaussian_dispersion(p: float) -> float:
    """Channel dispersion V(P) = P(P+2) / (2(1+P)^2), in nats^2."""
    return p * (p + 2.0) / (2.0 * (1.0 + p) ** 2)


def fbl_rate_bound(params: FblParams) -> float:
    """Normal-approximation rate at blocklength n, in bits per channel use.

    C(P) - sqrt(V(P)/n) * Qinv(eps) + log2(n)/(2n), with the capacity
    C(P) = log2(1+P)/2 and the dispersion term converted from nats; the
    O(1/n) remainder is dropped.
    """
    n = params.blocklength
    cap = 0.5 * math.log2(1.0 + params.p)
    qinv = float(norm.isf(params.epsilon))
    dispersion = math.sqrt(gaussian_dispersion(params.p) / n) * qinv / math.log(2.0)
    return cap - dispersion + 0.5 * math.log2(n) / n


def polarization_gain_db(mu_pas: float) -> float:
    """Power gain of boosting information symbols by mu_pas."""
    if mu_pas <= 0:
        raise ValueError("mu_pas must be positive")
    return 10.0 * math.log10(mu_pas)


def repetition_gain_db(n: int, j_users: int, k: int) -> float:
    """Combining gain of repeating each bit n/(J*k) times."""
    if n % (j_users * k):
        raise ValueError(f"J*k = {j_users * k} does not divide n = {n}")
    return 10.0 * math.log10(n / (j_users * k))


def gain_figures(n: int, k: int, j_users: int, mu_pas: float) -> dict[str, float]:
    """Closed-form gain figures for a scenario, in dB."""
    return {
        "polarization_gain_db": polarization_gain_db(mu_pas),
        "repetition_gain_db": repetition_gain_db(n, j_users, k),
    }


def interpolate_snr_at_ber(snr_db, ber, target: float) -> float:
    """SNR (dB) where a measured curve crosses a target BER.

    Linear interpolation of log10(BER) between the first adjacent pair
    that brackets the target; zero-BER points are treated as a decade
    below the target.  Raises if the curve never crosses.
    """
    snr_db = np.asarray(snr_db, dtype=np.float64)
    ber = np.asarray(ber, dtype=np.float64)
    if snr_db.shape != ber.shape or snr_db.ndim != 1:
        raise ValueError("snr_db and ber must be 1-D arrays of equal length")
    order = np.argsort(snr_db)
    snr_db, ber = snr_db[order], ber[order]
    floor = target / 10.0
    logb = np.log10(np.maximum(ber, floor))
    logt = math.log10(target)
    for i in range(len(snr_db) - 1):
        hi, lo = logb[i], logb[i + 1]
        if hi >= logt >= lo and hi > lo:
            frac = (hi - logt) / (hi - lo)
            return float(snr_db[i] + frac * (snr_db[i + 1] - snr_db[i]))
        if hi == logt:
            return float(snr_db[i])
    raise ValueError(f"curve never crosses BER {target:g}")
