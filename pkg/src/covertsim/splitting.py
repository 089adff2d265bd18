"""Transmitter-side analysis: message splitting and the overall catch probability.

Splitting a message into n chunks lowers the per-chunk catch probability but
multiplies the number of exposed transmissions; postponed slots (the
transmitter spots the warden nearby and waits) renormalize the per-slot
outcome. The geometric accounting over postponements collapses to a closed
form via the negative binomial theorem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .catch import catch_probability
from .geometry import DistanceLaw
from .params import ScenarioConfig


class ModelValidityError(ValueError):
    """Per-chunk catch plus postponement mass exceeds 1; the closed form is invalid."""


@dataclass(frozen=True)
class SplitPlan:
    n: int
    chunk_symbols: float
    p_ca_chunk: float
    p_as: float
    p_ov: float


@dataclass(frozen=True)
class StabilityBound:
    """Two readings of the queue-stability limit on the chunk count.

    ``paper_literal`` is floor(lambda * t_c) as printed in the source model;
    ``mg1_utilization`` is floor(1 / (lambda * t_c)) from requiring M/G/1
    utilization lambda * n * t_c < 1. They coincide only at lambda*t_c = 1.
    """
    paper_literal: int
    mg1_utilization: int


def postponement_probability(r_a_proj: float, law: DistanceLaw) -> float:
    """Probability the transmitter sees the warden inside her observation radius."""
    return law.cdf(law.clamp(r_a_proj))


def chunk_catch_probability(n: int, l: int, cfg: ScenarioConfig, r_bar: float,
                            mode: str = "paper-literal") -> float:
    """Catch probability for one of n equal chunks (analytic chunk length M/n)."""
    if n < 1:
        raise ValueError("chunk count must be >= 1")
    chunk = cfg.m_symbols / n
    return catch_probability(l, cfg, r_bar, mode=mode, m_symbols=chunk).p_ca


def overall_from_components(p_ca: float, p_as: float, n: int) -> float:
    """Closed-form overall catch probability from per-chunk components."""
    if n < 1:
        raise ValueError("chunk count must be >= 1")
    if not 0.0 <= p_as < 1.0:
        raise ValueError("postponement probability must lie in [0, 1)")
    if p_ca + p_as > 1.0:
        raise ModelValidityError(
            f"p_ca + p_as = {p_ca + p_as} > 1: the geometric-series base is "
            "negative and the closed form does not apply")
    return 1.0 - ((1.0 - p_ca - p_as) / (1.0 - p_as)) ** n


def overall_series_truncated(p_ca: float, p_as: float, n: int,
                             terms: int = 200) -> float:
    """Not-caught probability summed term by term over extra postponed slots.

    Independent cross-check of the negative-binomial collapse: spending n+i
    slots (i postponements) has probability C(n+i-1, i) (1-p_ca-p_as)^n p_as^i.
    Returns 1 minus the truncated sum.
    """
    base = (1.0 - p_ca - p_as) ** n
    total = 0.0
    for i in range(terms):
        total += math.comb(n + i - 1, i) * p_as**i
    return 1.0 - base * total


def overall_catch_probability(n: int, l: int, cfg: ScenarioConfig,
                              r_bar: float,
                              mode: str = "paper-literal") -> SplitPlan:
    law = DistanceLaw(cfg.u)
    p_as = postponement_probability(cfg.r_a_proj, law)
    p_ca = chunk_catch_probability(n, l, cfg, r_bar, mode=mode)
    p_ov = overall_from_components(p_ca, p_as, n)
    return SplitPlan(n=n, chunk_symbols=cfg.m_symbols / n,
                     p_ca_chunk=p_ca, p_as=p_as, p_ov=p_ov)


def optimal_chunks(cfg: ScenarioConfig, l: int, r_bar: float, n_max: int = 30,
                   mode: str = "paper-literal") -> tuple[int, float]:
    """Exhaustive scan of chunk counts; ties broken toward fewer chunks."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    best_n, best_p = 1, math.inf
    for j in range(1, n_max + 1):
        p = overall_catch_probability(j, l, cfg, r_bar, mode=mode).p_ov
        if p < best_p:
            best_n, best_p = j, p
    return best_n, best_p


def stability_bound(lambda_per_min: float, t_c_minutes: float) -> StabilityBound:
    if lambda_per_min <= 0 or t_c_minutes <= 0:
        raise ValueError("arrival rate and slot interval must be positive")
    rho = lambda_per_min * t_c_minutes
    return StabilityBound(paper_literal=math.floor(rho),
                          mg1_utilization=math.floor(1.0 / rho))
