"""Warden-side catch probability: distance strata and the window-size scan.

A detection attempt only helps the warden if, after it fires, enough of the
transmission remains for him to fly within his catching radius. Sorting the
initial separation into strata by how many attempts are still useful turns
the catch probability into a sum of per-stratum terms, each evaluated at a
representative distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import channel, detection
from .geometry import DistanceLaw, slant_distance
from .params import ScenarioConfig, to_linear


@dataclass(frozen=True)
class Stratum:
    s: int            # useful-attempt count for this distance range
    d1: float         # projected-distance interval, meters (clamped)
    d2: float
    p_dis: float      # probability the separation falls in the interval
    d_bar: float      # representative projected distance, meters
    p_md: float       # miss-detection probability at the slanted d_bar
    p_catch_given_s: float

    def contribution(self) -> float:
        return self.p_catch_given_s * self.p_dis


@dataclass(frozen=True)
class CatchBreakdown:
    window_l: int
    strata: tuple[Stratum, ...]
    p_ca: float


def max_effective_detections(m_symbols: float, l: int, l_s: int) -> int:
    """Largest number of attempts that can fit usefully into the message."""
    if l < 1:
        raise ValueError("window size l must be >= 1")
    if m_symbols < 1:
        raise ValueError("message length must be >= 1")
    if l >= m_symbols:
        return 0
    return math.ceil((m_symbols - l) / (l + l_s))


def stratum_interval(i: int, s_m: int, m_symbols: float, l: int, l_s: int,
                     v_w: float, r_bar: float, r_w_proj: float,
                     r_a_proj: float) -> tuple[float, float]:
    """Raw (unclamped) projected-distance interval on which exactly i attempts help.

    The innermost stratum (i = s_m) starts at the transmitter's observation
    radius; farther strata chain outward with shared endpoints.
    """
    if not 1 <= i <= s_m:
        raise ValueError(f"stratum index {i} outside [1, {s_m}]")

    def upper(j):
        return v_w * (m_symbols - l - (l + l_s) * j) / r_bar + r_w_proj

    if i == s_m:
        return r_a_proj, upper(s_m - 1)
    return upper(i), upper(i - 1)


def catch_probability(l: int, cfg: ScenarioConfig, r_bar: float,
                      mode: str = "paper-literal",
                      m_symbols: float | None = None,
                      threshold: float | None = None) -> CatchBreakdown:
    """Catch probability for one transmission of m_symbols at window size l."""
    if r_bar <= 0:
        raise ValueError("average rate must be positive")
    m = cfg.m_symbols if m_symbols is None else m_symbols
    lin = to_linear(cfg)
    law = DistanceLaw(cfg.u)
    s_m = max_effective_detections(m, l, cfg.l_s)
    if s_m == 0:
        return CatchBreakdown(window_l=l, strata=(), p_ca=0.0)
    if threshold is None:
        threshold = detection.solve_threshold(l, cfg.delta, lin.sigma_w2_w)

    strata = []
    p_ca = 0.0
    for i in range(1, s_m + 1):
        d1_raw, d2_raw = stratum_interval(i, s_m, m, l, cfg.l_s, cfg.v_w,
                                          r_bar, cfg.r_w_proj, cfg.r_a_proj)
        d1, d2 = law.clamp(d1_raw), law.clamp(d2_raw)
        p_dis = law.interval_probability(d1, d2)
        if p_dis <= 0.0:
            strata.append(Stratum(i, d1, d2, 0.0, d1, 1.0, 0.0))
            continue
        d_bar = law.representative_distance(d1, d2, mode=mode)
        d_slant = float(slant_distance(d_bar, cfg.h_w))
        g_aw = float(channel.nlos_gain(lin.g_a, lin.g_w, lin.eta, d_slant,
                                       cfg.alpha_nlos))
        p_md = detection.miss_detection(l, threshold, g_aw, lin.p_a_w,
                                        lin.sigma_w2_w)
        p_catch = 1.0 - p_md**i
        strata.append(Stratum(i, d1, d2, p_dis, d_bar, p_md, p_catch))
        p_ca += p_catch * p_dis
    return CatchBreakdown(window_l=l, strata=tuple(strata), p_ca=p_ca)


def optimal_window(cfg: ScenarioConfig, r_bar: float, l_max: int,
                   mode: str = "paper-literal") -> tuple[int, float]:
    """Exhaustive scan of window sizes; ties broken toward the smaller window."""
    if not 1 <= l_max <= cfg.m_symbols:
        raise ValueError("l_max must lie in [1, m_symbols]")
    best_l, best_p = 1, -1.0
    for j in range(1, l_max + 1):
        p = catch_probability(j, cfg, r_bar, mode=mode).p_ca
        if p > best_p:
            best_l, best_p = j, p
    return best_l, best_p
