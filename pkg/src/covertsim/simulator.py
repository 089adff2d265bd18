"""Event-driven Monte-Carlo ground truth for slots and multi-slot case studies.

Each simulated slot places the two parties uniformly in the square, runs the
periodic detection attempts against actual window-statistic draws, and plays
out the chase kinematics. Trials are generated in fixed-size blocks, each on
its own substream keyed by (seed, block index), so aggregate counts do not
depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channel, detection
from .params import ScenarioConfig, to_linear

BLOCK = 10_000
_Z99 = 2.5758293035489004

POSTPONED = "Postponed"
UNDETECTED = "Undetected"
DETECTED_NOT_CAUGHT = "DetectedNotCaught"
CAUGHT = "Caught"


@dataclass(frozen=True)
class SlotOutcome:
    kind: str
    d_proj: float
    first_detection_symbol: float | None


@dataclass(frozen=True)
class CatchEstimate:
    p_hat: float
    ci_halfwidth: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int
    n_caught: int
    n_postponed: int
    n_detected: int


@dataclass(frozen=True)
class CaseStats:
    mean_covert: float
    ci_halfwidth: float
    mean_caught_events: float
    trials: int
    seed: int


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(block,)))


def _slot_batch(cfg: ScenarioConfig, lin, l: int, gamma_w: float,
                chunk_symbols, r_bar: float, rng: np.random.Generator,
                random_phase: bool = False):
    """Simulate one slot for a batch of trials; returns a dict of arrays."""
    chunk = np.atleast_1d(np.asarray(chunk_symbols, dtype=float))
    size = chunk.shape[0]
    ax = rng.uniform(0.0, cfg.u, size)
    ay = rng.uniform(0.0, cfg.u, size)
    wx = rng.uniform(0.0, cfg.u, size)
    wy = rng.uniform(0.0, cfg.u, size)
    d = np.hypot(ax - wx, ay - wy)
    postponed = d <= cfg.r_a_proj

    step = l + cfg.l_s
    phase = rng.uniform(0.0, step, size) if random_phase else np.zeros(size)
    # attempts must end strictly inside the chunk: k*step + l < chunk, which
    # counts ceil((chunk - l)/step) attempts and agrees with the analytic
    # effective-detection bound including its integer boundary case
    n_att = np.maximum(np.ceil((chunk - phase - l) / step).astype(int), 0)

    caught = np.zeros(size, dtype=bool)
    detected = np.zeros(size, dtype=bool)
    first_sym = np.full(size, np.nan)

    n_max = int(n_att.max(initial=0))
    if n_max > 0:
        d_slant = np.hypot(d, cfg.h_w)
        g_aw = channel.nlos_gain(lin.g_a, lin.g_w, lin.eta, d_slant,
                                 cfg.alpha_nlos)
        power = g_aw * g_aw * lin.p_a_w + lin.sigma_w2_w
        stats = detection.sample_window_statistic(l, power[:, None], rng,
                                                  size=(size, n_max))
        valid = np.arange(n_max)[None, :] < n_att[:, None]
        success = (stats > gamma_w) & valid
        hit = success.any(axis=1)
        first_k = np.argmax(success, axis=1)
        tau = phase + first_k * step + l
        chase = np.maximum(0.0, d - cfg.r_w_proj) * r_bar / cfg.v_w
        detected = hit & ~postponed
        caught = detected & (tau + chase <= chunk)
        first_sym = np.where(detected, tau, np.nan)

    return {"d_proj": d, "postponed": postponed, "detected": detected,
            "caught": caught, "first_symbol": first_sym}


def simulate_slot(cfg: ScenarioConfig, l: int, gamma_w: float,
                  chunk_symbols: float, r_bar: float,
                  rng: np.random.Generator,
                  random_phase: bool = False) -> SlotOutcome:
    """Play out a single transmission slot."""
    if chunk_symbols < 1:
        raise ValueError("chunk length must be >= 1 symbol")
    lin = to_linear(cfg)
    res = _slot_batch(cfg, lin, l, gamma_w, [chunk_symbols], r_bar, rng,
                      random_phase=random_phase)
    d = float(res["d_proj"][0])
    if res["postponed"][0]:
        return SlotOutcome(POSTPONED, d, None)
    if res["caught"][0]:
        return SlotOutcome(CAUGHT, d, float(res["first_symbol"][0]))
    if res["detected"][0]:
        return SlotOutcome(DETECTED_NOT_CAUGHT, d, float(res["first_symbol"][0]))
    return SlotOutcome(UNDETECTED, d, None)


def wilson_interval(successes: int, trials: int,
                    z: float = _Z99) -> tuple[float, float, float]:
    """Wilson score interval; returns (center, low, high)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials
                         + z2 / (4.0 * trials * trials)) / denom
    return center, center - half, center + half


def estimate_catch(cfg: ScenarioConfig, l: int, chunk_symbols: float,
                   r_bar: float, trials: int, seed: int,
                   gamma_w: float | None = None,
                   random_phase: bool = False) -> CatchEstimate:
    """Monte-Carlo catch probability over independent slots.

    Postponed slots count as not-caught, matching the analytic accounting
    where the mass inside the observation radius contributes zero catch.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials for a meaningful interval")
    lin = to_linear(cfg)
    if gamma_w is None:
        gamma_w = detection.solve_threshold(l, cfg.delta, lin.sigma_w2_w)
    n_caught = n_post = n_det = 0
    done = 0
    block = 0
    while done < trials:
        size = min(BLOCK, trials - done)
        rng = _block_rng(seed, block)
        res = _slot_batch(cfg, lin, l, gamma_w,
                          np.full(size, float(chunk_symbols)), r_bar, rng,
                          random_phase=random_phase)
        n_caught += int(res["caught"].sum())
        n_post += int(res["postponed"].sum())
        n_det += int(res["detected"].sum())
        done += size
        block += 1
    center, low, high = wilson_interval(n_caught, trials)
    return CatchEstimate(p_hat=n_caught / trials,
                         ci_halfwidth=(high - low) / 2.0,
                         ci_low=low, ci_high=high, trials=trials, seed=seed,
                         n_caught=n_caught, n_postponed=n_post,
                         n_detected=n_det)


def estimate_overall_catch(cfg: ScenarioConfig, n: int, l: int, r_bar: float,
                           trials: int, seed: int,
                           random_phase: bool = False,
                           max_postponements: int = 10_000) -> CatchEstimate:
    """Monte-Carlo overall catch probability for one n-chunk message.

    Each chunk occupies one slot; a postponed slot is retried with a fresh
    placement. The message counts as caught if any chunk transmission is.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials for a meaningful interval")
    lin = to_linear(cfg)
    gamma_w = detection.solve_threshold(l, cfg.delta, lin.sigma_w2_w)
    chunk = cfg.m_symbols / n
    n_caught = 0
    done = 0
    block = 0
    while done < trials:
        size = min(BLOCK, trials - done)
        rng = _block_rng(seed, block)
        caught = np.zeros(size, dtype=bool)
        alive = np.ones(size, dtype=bool)
        for _ in range(n):
            pending = alive.copy()
            for _ in range(max_postponements):
                idx = np.nonzero(pending)[0]
                if idx.size == 0:
                    break
                res = _slot_batch(cfg, lin, l, gamma_w,
                                  np.full(idx.size, chunk), r_bar, rng,
                                  random_phase=random_phase)
                pending[idx] = res["postponed"]
                hit = idx[res["caught"]]
                caught[hit] = True
                alive[hit] = False
            else:
                raise RuntimeError("postponement retry cap exceeded")
        n_caught += int(caught.sum())
        done += size
        block += 1
    center, low, high = wilson_interval(n_caught, trials)
    return CatchEstimate(p_hat=n_caught / trials,
                         ci_halfwidth=(high - low) / 2.0,
                         ci_low=low, ci_high=high, trials=trials, seed=seed,
                         n_caught=n_caught, n_postponed=0, n_detected=0)


def _run_case(cfg: ScenarioConfig, n: int, l: int, r_bar: float, trials: int,
              seed: int, stop_on_catch: bool,
              random_phase: bool = False) -> CaseStats:
    if n < 1:
        raise ValueError("chunk count must be >= 1")
    lin = to_linear(cfg)
    gamma_w = detection.solve_threshold(l, cfg.delta, lin.sigma_w2_w)
    base = cfg.m_symbols // n
    rem = cfg.m_symbols % n
    if base < 1:
        raise ValueError("chunks shorter than one symbol")
    arrival_mean = cfg.lambda_per_min * cfg.t_c_minutes

    covert_all = np.empty(trials, dtype=np.int64)
    caught_all = np.empty(trials, dtype=np.int64)
    done = 0
    block = 0
    while done < trials:
        size = min(BLOCK, trials - done)
        rng = _block_rng(seed, block)
        queue = np.zeros(size, dtype=np.int64)
        chunks_left = np.zeros(size, dtype=np.int64)
        covert = np.zeros(size, dtype=np.int64)
        caught_events = np.zeros(size, dtype=np.int64)
        ever_caught = np.zeros(size, dtype=bool)
        for _ in range(cfg.beta_slots):
            queue += rng.poisson(arrival_mean, size)
            start = (chunks_left == 0) & (queue > 0)
            chunks_left = np.where(start, n, chunks_left)
            active = chunks_left > 0
            if stop_on_catch:
                active &= ~ever_caught
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                continue
            chunk_sz = np.where(chunks_left[idx] == 1, base + rem,
                                base).astype(float)
            res = _slot_batch(cfg, lin, l, gamma_w, chunk_sz, r_bar, rng,
                              random_phase=random_phase)
            caught_slot = np.zeros(size, dtype=bool)
            caught_slot[idx] = res["caught"]
            postponed = np.zeros(size, dtype=bool)
            postponed[idx] = res["postponed"]

            caught_events += caught_slot
            ever_caught |= caught_slot
            if not stop_on_catch:
                # only the current message is lost; drop its remaining chunks
                queue = np.where(caught_slot, queue - 1, queue)
                chunks_left = np.where(caught_slot, 0, chunks_left)
            progressed = active & ~postponed & ~caught_slot
            chunks_left = np.where(progressed, chunks_left - 1, chunks_left)
            finished = progressed & (chunks_left == 0)
            covert += finished
            queue = np.where(finished, queue - 1, queue)
        covert_all[done:done + size] = covert
        caught_all[done:done + size] = caught_events
        done += size
        block += 1

    mean = float(np.mean(covert_all))
    half = 0.0
    if trials > 1:
        half = _Z99 * float(np.std(covert_all, ddof=1)) / math.sqrt(trials)
    return CaseStats(mean_covert=mean, ci_halfwidth=half,
                     mean_caught_events=float(np.mean(caught_all)),
                     trials=trials, seed=seed)


def run_case1(cfg: ScenarioConfig, n: int, l: int, r_bar: float, trials: int,
              seed: int, random_phase: bool = False) -> CaseStats:
    """Poisson-fed queue over beta slots; a catch ends covert counting for good."""
    return _run_case(cfg, n, l, r_bar, trials, seed, stop_on_catch=True,
                     random_phase=random_phase)


def run_case2(cfg: ScenarioConfig, n: int, l: int, r_bar: float, trials: int,
              seed: int, random_phase: bool = False) -> CaseStats:
    """As case 1 but a catch only voids the message currently in flight."""
    return _run_case(cfg, n, l, r_bar, trials, seed, stop_on_catch=False,
                     random_phase=random_phase)
