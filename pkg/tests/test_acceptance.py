"""Acceptance gate: one test per release criterion.

Each test prints a single ``[PASS]`` line on success (visible with ``-s``);
a failure shows up as the usual pytest FAILED line for that criterion.
"""
import math
import time

import numpy as np
import pytest
from scipy import integrate

from covertsim import (DistanceLaw, average_rate, catch_probability,
                       estimate_catch, false_alarm, load_config,
                       miss_detection, optimal_chunks, optimal_window,
                       overall_catch_probability, overall_from_components,
                       overall_series_truncated, run_case1, run_case2,
                       sample_window_statistic, solve_threshold, to_linear)
from covertsim.cli import main

SIGMA_W2 = 1e-12  # -90 dBm


def _report(tag, detail):
    print(f"[PASS] {tag}: {detail}")


def test_c01_geometry_exactness():
    t0 = time.monotonic()
    law = DistanceLaw(1000.0)
    u = law.u
    assert abs(law.cdf(law.d_max) - 1.0) <= 1e-12

    # symmetric second difference cancels the (genuine) slope at the seam,
    # leaving only a branch-mismatch jump
    h = 1e-9
    for f in (law.pdf, law.cdf, law.partial_first_moment):
        assert abs(f(u - h) + f(u + h) - 2.0 * f(u)) <= 1e-12

    mass, _ = integrate.quad(law.pdf, 0.0, law.d_max, points=[u], limit=200)
    assert abs(mass - 1.0) <= 1e-9

    rng = np.random.default_rng(2026)
    d = np.sort(law.sample_pair_distance(rng, size=1_000_000))
    f_theo = np.array([law.cdf(x) for x in d])
    n = d.size
    ks = max(float(np.max(np.arange(1, n + 1) / n - f_theo)),
             float(np.max(f_theo - np.arange(0, n) / n)))
    assert ks < 0.002

    elapsed = time.monotonic() - t0
    assert elapsed < 30.0
    _report("C1 geometry exactness",
            f"ks={ks:.5f} quad_mass_err={abs(mass - 1.0):.2e} "
            f"({elapsed:.1f}s)")


def test_c02_detection_calibration():
    t0 = time.monotonic()
    worst = 0.0
    thresholds = {}
    for l in range(1, 201):
        g = solve_threshold(l, 0.05, SIGMA_W2)
        thresholds[l] = g
        worst = max(worst, abs(false_alarm(l, g, SIGMA_W2) - 0.05))
    assert worst <= 1e-8

    n = 100_000
    se = math.sqrt(0.05 * 0.95 / n)
    rng = np.random.default_rng(11)
    for l in (1, 10, 100):
        draws = sample_window_statistic(l, SIGMA_W2, rng, size=n)
        rate = float(np.mean(draws > thresholds[l]))
        assert abs(rate - 0.05) <= 3 * se

    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    _report("C2 detection calibration",
            f"max|P_FA-0.05|={worst:.2e} over L=1..200 ({elapsed:.1f}s)")


def test_c03_miss_detection_oracle():
    rng = np.random.default_rng(42)
    n = 100_000
    worst_sigmas = 0.0
    for _ in range(20):
        l = int(rng.integers(1, 51))
        g = 10.0 ** rng.uniform(-7.0, -5.0)
        p_a = float(rng.uniform(0.1, 2.0))
        power = g * g * p_a + SIGMA_W2
        gamma_w = power * float(rng.uniform(0.7, 1.3))
        p = miss_detection(l, gamma_w, g, p_a, SIGMA_W2)
        draws = sample_window_statistic(l, power, rng, size=n)
        emp = float(np.mean(draws <= gamma_w))
        tol = 3.0 * math.sqrt(max(p * (1.0 - p), 1e-12) / n) + 5.0 / n
        assert abs(emp - p) <= tol
        if p * (1 - p) > 0:
            worst_sigmas = max(worst_sigmas, abs(emp - p)
                               / math.sqrt(p * (1 - p) / n))
    _report("C3 miss-detection oracle",
            f"20 tuples x 1e5 draws, worst deviation {worst_sigmas:.2f} SE")


def test_c04_fig3_reproduction():
    t0 = time.monotonic()
    base = load_config({"defaults": "table1"})
    variants = []
    for w in (0.1, 0.5, 1.0, 1.5, 2.0):
        variants.append(base.replace(p_a_dbw=10.0 * math.log10(w)))
    for m in (300, 400, 500, 600, 700):
        variants.append(base.replace(m_bits=m))
    for u in (800.0, 1000.0, 1200.0, 1400.0, 1600.0):
        variants.append(base.replace(u=u))
    assert len(variants) == 15

    spans = []
    for cfg in variants:
        r_bar = average_rate(cfg, trials=100_000, seed=7).mean_rate
        vals = [catch_probability(l, cfg, r_bar).p_ca for l in range(1, 101)]
        spans.append(max(vals) - min(vals))

    r_bar0 = average_rate(base, trials=100_000, seed=7).mean_rate
    l_star, _ = optimal_window(base, r_bar0, 100)
    assert l_star <= 10

    elapsed = time.monotonic() - t0
    assert elapsed < 10.0

    # Known shortfall: the 0.1 W curve genuinely spans ~0.31 (confirmed by
    # an independent Monte-Carlo run that brackets the same values), so the
    # required band cannot hold for all 15 curves. Kept asserted as specified.
    bad = [f"curve#{i} span={s:.4f}"
           for i, s in enumerate(spans) if not 0.03 <= s <= 0.20]
    assert not bad, "; ".join(bad)
    _report("C4 window-sweep reproduction",
            f"spans {min(spans):.3f}..{max(spans):.3f} over 15 curves, "
            f"L*={l_star} ({elapsed:.1f}s)")


def test_c05_analytic_vs_mc_closure(cfg, r_bar):
    t0 = time.monotonic()
    grid = [2, 5, 8, 10, 15, 25, 40, 60, 80, 100]
    gap = 0.0
    for l in grid:
        est = estimate_catch(cfg, l, cfg.m_symbols, r_bar, 100_000, seed=7)
        cm = catch_probability(l, cfg, r_bar, mode="conditional-mean").p_ca
        pl = catch_probability(l, cfg, r_bar, mode="paper-literal").p_ca
        assert est.ci_low <= cm <= est.ci_high, (
            f"L={l}: analytic {cm:.4f} outside "
            f"[{est.ci_low:.4f}, {est.ci_high:.4f}]")
        gap = max(gap, abs(pl - cm))
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0
    _report("C5 analytic-vs-MC closure",
            f"10 L-points inside 99% CI at 1e5 trials; literal-mode gap "
            f"<= {gap:.4f} ({elapsed:.1f}s)")


def test_c06_negative_binomial_identity():
    worst = 0.0
    for p_ca in (0.0, 0.05, 0.2, 0.45, 0.8):
        for p_as in (0.0, 0.0288, 0.08, 0.14, 0.19):
            for n in (1, 12):
                closed = overall_from_components(p_ca, p_as, n)
                series = overall_series_truncated(p_ca, p_as, n, terms=200)
                worst = max(worst, abs(closed - series))
    assert worst <= 1e-10
    _report("C6 negative-binomial identity",
            f"max |closed - series| = {worst:.2e} over 50-point grid")


def test_c07_fig5_reproduction(cfg, r_bar):
    scan = [overall_catch_probability(n, 10, cfg, r_bar).p_ov
            for n in range(1, 31)]
    span = max(scan) - min(scan)
    assert span >= 0.10

    diffs = np.diff(scan)
    signs = np.sign(diffs[np.abs(diffs) > 1e-12])
    changes = int(np.sum(signs[1:] != signs[:-1]))
    assert changes == 1, f"curve changes direction {changes} times"

    n_star, p_star = optimal_chunks(cfg, 10, r_bar, n_max=30)
    grid_argmin = int(np.argmin(scan)) + 1
    assert n_star == grid_argmin and p_star == min(scan)
    _report("C7 chunk-sweep reproduction",
            f"span {span:.3f}, one valley, n*={n_star}")


def test_c08_monotonicity_suite(cfg, r_bar):
    lin = to_linear(cfg)
    gammas = [SIGMA_W2 * s for s in (0.7, 0.9, 1.0, 1.1, 1.3)]
    fa = [false_alarm(10, g, SIGMA_W2) for g in gammas]
    assert fa == sorted(fa, reverse=True)
    md = [miss_detection(10, g, 1e-6, 1.0, SIGMA_W2) for g in gammas]
    assert md == sorted(md)
    gamma_w = solve_threshold(10, cfg.delta, SIGMA_W2)
    md_pa = [miss_detection(10, gamma_w, 1e-6, p, SIGMA_W2)
             for p in (0.1, 0.5, 1.0, 1.5, 2.0)]
    assert md_pa == sorted(md_pa, reverse=True)

    # catch probability over the panel grids, analytic and MC within CI
    m_grid, u_grid = [], []
    for m in (300, 400, 500, 600, 700):
        c = cfg.replace(m_bits=m)
        a = catch_probability(10, c, r_bar).p_ca
        e = estimate_catch(c, 10, c.m_symbols, r_bar, 50_000, seed=7)
        m_grid.append((a, e))
    for u in (800.0, 1000.0, 1200.0, 1400.0, 1600.0):
        c = cfg.replace(u=u)
        a = catch_probability(10, c, r_bar).p_ca
        e = estimate_catch(c, 10, c.m_symbols, r_bar, 50_000, seed=7)
        u_grid.append((a, e))
    assert [a for a, _ in m_grid] == sorted(a for a, _ in m_grid)
    assert [a for a, _ in u_grid] == sorted((a for a, _ in u_grid),
                                            reverse=True)
    for (_, e1), (_, e2) in zip(m_grid, m_grid[1:]):
        assert e2.p_hat >= e1.p_hat - (e1.ci_halfwidth + e2.ci_halfwidth)
    for (_, e1), (_, e2) in zip(u_grid, u_grid[1:]):
        assert e2.p_hat <= e1.p_hat + (e1.ci_halfwidth + e2.ci_halfwidth)

    est = estimate_catch(cfg, 10, cfg.m_symbols, r_bar, 100_000, seed=7)
    law = DistanceLaw(cfg.u)
    p0 = law.cdf(cfg.r_a_proj)
    se = math.sqrt(p0 * (1 - p0) / est.trials)
    frac = est.n_postponed / est.trials
    assert abs(frac - p0) <= 3 * se
    assert abs(p0 - 0.0288) < 2e-4
    _report("C8 monotonicity suite",
            f"error-prob orderings hold; postponement {frac:.4f} vs "
            f"{p0:.4f} (3SE={3 * se:.4f})")


def test_c09_case_studies(cfg, r_bar):
    t0 = time.monotonic()
    n_grid = range(1, 16)

    chase = cfg.replace(r_w_proj=120.0)
    curves = {}
    for lam in (0.04, 0.1):
        c = chase.replace(lambda_per_min=lam)
        curves[lam] = [run_case1(c, n, 10, r_bar, 10_000, seed=7)
                       for n in n_grid]
    for lam, row in curves.items():
        vals = [s.mean_covert for s in row]
        k = int(np.argmax(vals))
        assert 0 < k < len(vals) - 1, f"case1 peak at boundary (lam={lam})"
        assert vals[0] < vals[k] - (row[0].ci_halfwidth
                                    + row[k].ci_halfwidth)
        assert np.mean(vals[-3:]) < vals[k] - row[k].ci_halfwidth
    for s1, s2 in zip(curves[0.04], curves[0.1]):
        assert abs(s1.mean_covert - s2.mean_covert) <= (
            s1.ci_halfwidth + s2.ci_halfwidth)

    long_msg = cfg.replace(m_bits=900)
    row2 = [run_case2(long_msg, n, 10, r_bar, 10_000, seed=7)
            for n in n_grid]
    vals2 = [s.mean_covert for s in row2]
    n_best = int(np.argmax(vals2)) + 1
    assert n_best <= 5

    elapsed = time.monotonic() - t0
    assert elapsed < 600.0
    _report("C9 case studies",
            f"case-1 interior peak, rate-curves coincide; case-2 best "
            f"n={n_best} ({elapsed:.1f}s)")


def test_c10_determinism(tmp_path):
    argsets = [
        ["rate", "--trials", "5000"],
        ["distlaw"],
        ["sweep-window", "--l-max", "5", "--trials", "500"],
        ["optimize-window", "--l-max", "5"],
        ["sweep-chunks", "--n-max", "4", "--trials", "300"],
        ["optimize-chunks", "--n-max", "4"],
        ["case1", "--n-max", "2", "--trials", "200"],
        ["case2", "--n-max", "2", "--trials", "200"],
        ["verify", "--trials", "2000"],
        ["fig3", "--trials", "0"],
        ["fig4", "--trials", "500"],
        ["fig5", "--trials", "0"],
        ["fig6", "--n-max", "2", "--trials", "100"],
        ["fig7", "--n-max", "2", "--trials", "100"],
    ]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    n_files = 0
    for args in argsets:
        assert main(args + ["--seed", "7", "--out", str(d1)]) == 0
        assert main(args + ["--seed", "7", "--out", str(d2)]) == 0
    files = sorted(d1.iterdir())
    assert files
    for f in files:
        assert f.read_bytes() == (d2 / f.name).read_bytes(), f.name
        n_files += 1
    _report("C10 determinism",
            f"{len(argsets)} subcommands, {n_files} CSVs byte-identical "
            "across reruns")
