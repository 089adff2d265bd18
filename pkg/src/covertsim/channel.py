"""Link gains, Rician fading, and the Monte-Carlo average uplink rate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ScenarioConfig, to_linear

# Above this Rician factor the diffuse part is below float resolution; treat
# the channel as purely line-of-sight.
_K0_DETERMINISTIC = 1e12

DEFAULT_RATE_TRIALS = 1_000_000


def los_gain(g_a: float, g_b: float, d: float, alpha_los: float) -> float:
    """Line-of-sight amplitude gain sqrt(g_a*g_b)/d^alpha."""
    if d <= 0:
        raise ValueError("distance must be positive")
    return math.sqrt(g_a * g_b) / d**alpha_los


def nlos_gain(g_a: float, g_w: float, eta: float, d, alpha_nlos: float):
    """Obstructed-path amplitude gain sqrt(eta*g_a*g_w)/d^alpha."""
    if np.any(np.asarray(d) <= 0):
        raise ValueError("distance must be positive")
    return math.sqrt(eta * g_a * g_w) / np.asarray(d)**alpha_nlos


@dataclass(frozen=True)
class FadingSample:
    re: float
    im: float

    @property
    def gain_sq(self) -> float:
        return self.re * self.re + self.im * self.im


def sample_rician(k0: float, rng: np.random.Generator, size=None):
    """Draw |h|^2 for a Rician channel with unit mean power.

    The deterministic component has unit amplitude and zero phase; the diffuse
    component is a standard complex Gaussian. Only the squared magnitude feeds
    the rate, so the fixed phase is immaterial.
    """
    if k0 < 0:
        raise ValueError("Rician factor must be non-negative")
    if k0 >= _K0_DETERMINISTIC:
        return 1.0 if size is None else np.ones(size)
    los = math.sqrt(k0 / (1.0 + k0))
    diffuse = math.sqrt(1.0 / (1.0 + k0))
    re = rng.standard_normal(size) / math.sqrt(2.0)
    im = rng.standard_normal(size) / math.sqrt(2.0)
    return (los + diffuse * re) ** 2 + (diffuse * im) ** 2


def sample_fading(k0: float, rng: np.random.Generator) -> FadingSample:
    """One complex fading coefficient (scalar convenience around sample_rician)."""
    if k0 < 0:
        raise ValueError("Rician factor must be non-negative")
    if k0 >= _K0_DETERMINISTIC:
        return FadingSample(1.0, 0.0)
    los = math.sqrt(k0 / (1.0 + k0))
    diffuse = math.sqrt(1.0 / (1.0 + k0))
    re, im = rng.standard_normal(2) / math.sqrt(2.0)
    return FadingSample(los + diffuse * re, diffuse * im)


def instantaneous_rate(p_a: float, g_ab: float, h_sq, sigma_b2: float):
    """Shannon rate in bits/symbol at the given fading realization."""
    if sigma_b2 <= 0:
        raise ValueError("receiver noise power must be positive")
    return np.log2(1.0 + p_a * g_ab * g_ab * np.asarray(h_sq) / sigma_b2)


@dataclass(frozen=True)
class RateEstimate:
    mean_rate: float
    std_error: float
    trials: int
    seed: int
    degenerate: bool = False  # single-trial estimates report std_error 0


def average_rate(cfg: ScenarioConfig, trials: int = DEFAULT_RATE_TRIALS,
                 seed: int = 0) -> RateEstimate:
    """Monte-Carlo mean uplink rate over i.i.d. Rician fading draws."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lin = to_linear(cfg)
    g_ab = los_gain(lin.g_a, lin.g_b, cfg.d_ab, cfg.alpha_los)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    h_sq = sample_rician(cfg.k0, rng, size=trials)
    rates = instantaneous_rate(lin.p_a_w, g_ab, h_sq, lin.sigma_b2_w)
    rates = np.atleast_1d(rates)
    mean = float(np.mean(rates))
    if trials == 1:
        return RateEstimate(mean, 0.0, trials, seed, degenerate=True)
    stderr = float(np.std(rates, ddof=1) / math.sqrt(trials))
    return RateEstimate(mean, stderr, trials, seed)
