"""Windowed energy detection: error probabilities and threshold calibration.

The averaged power of L complex-Gaussian symbols is Gamma(L) distributed with
mean equal to the per-symbol power, so both error probabilities reduce to the
regularized lower incomplete gamma function. That function is implemented
here directly (series below x = a+1, continued fraction above) because every
probability in the model flows through it and it has to be testable against
an independent quadrature oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

_EPS = 1e-15
_MAX_ITER = 600
_TINY = 1e-300


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a), accurate to ~1e-14 relative."""
    if a <= 0:
        raise ValueError(f"shape a must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument x must be non-negative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_cont_frac(a, x)


def _gamma_series(a: float, x: float) -> float:
    # P(a,x) = e^{-x} x^a / Gamma(a) * sum_{n>=0} x^n / (a(a+1)...(a+n))
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise RuntimeError(f"incomplete-gamma series failed to converge (a={a}, x={x})")
    log_prefix = -x + a * math.log(x) - math.lgamma(a)
    return total * math.exp(log_prefix)


def _gamma_cont_frac(a: float, x: float) -> float:
    # Q(a,x) via the Lentz-evaluated continued fraction.
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise RuntimeError(f"incomplete-gamma continued fraction failed (a={a}, x={x})")
    log_prefix = -x + a * math.log(x) - math.lgamma(a)
    return math.exp(log_prefix) * h


def false_alarm(l: int, gamma_w: float, sigma_w2: float) -> float:
    """Probability the detector fires on noise alone."""
    if l < 1:
        raise ValueError("window size l must be >= 1")
    if gamma_w < 0:
        raise ValueError("threshold must be non-negative")
    return 1.0 - regularized_lower_gamma(l, l * gamma_w / sigma_w2)


def miss_detection(l: int, gamma_w: float, g_aw: float, p_a: float,
                   sigma_w2: float) -> float:
    """Probability the detector stays silent while the transmitter is active."""
    if l < 1:
        raise ValueError("window size l must be >= 1")
    if gamma_w < 0:
        raise ValueError("threshold must be non-negative")
    power = g_aw * g_aw * p_a + sigma_w2
    return regularized_lower_gamma(l, l * gamma_w / power)


def solve_threshold(l: int, delta: float, sigma_w2: float) -> float:
    """Threshold with false-alarm probability exactly delta (|error| <= 1e-10)."""
    if l < 1:
        raise ValueError("window size l must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")

    def resid(g):
        return false_alarm(l, g, sigma_w2) - delta

    lo = 0.0
    hi = sigma_w2 * (1.0 + 10.0 / math.sqrt(l))
    for _ in range(200):
        if resid(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise RuntimeError(f"threshold bracket failed: resid({hi})={resid(hi)}")
    gamma_w = brentq(resid, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=300)
    err = abs(resid(gamma_w))
    if err > 1e-10:
        raise RuntimeError(f"threshold solve off by {err} (l={l}, delta={delta})")
    return gamma_w


def sample_window_statistic(l: int, power: float, rng: np.random.Generator,
                            size=None):
    """Draw the averaged-power statistic: Gamma(shape l, mean = power)."""
    if l < 1:
        raise ValueError("window size l must be >= 1")
    if np.any(np.asarray(power) <= 0):
        raise ValueError("per-symbol power must be positive")
    return rng.gamma(shape=l, scale=np.asarray(power) / l, size=size)


@dataclass(frozen=True)
class DetectionCurve:
    """A detection window together with its calibrated threshold."""
    window_l: int
    threshold: float
    delta: float
    sigma_w2: float

    @classmethod
    def calibrate(cls, window_l: int, delta: float, sigma_w2: float) -> "DetectionCurve":
        return cls(window_l=window_l,
                   threshold=solve_threshold(window_l, delta, sigma_w2),
                   delta=delta, sigma_w2=sigma_w2)

    def miss_detection(self, g_aw: float, p_a: float) -> float:
        return miss_detection(self.window_l, self.threshold, g_aw, p_a, self.sigma_w2)
