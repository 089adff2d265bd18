"""Command-line entry point: sweeps, figure reproduction, verification reports.

Every subcommand resolves one ScenarioConfig (``--config`` plus repeatable
``--set key=value`` overrides), runs deterministically from ``--seed``, and
writes CSV files whose footer records seed, trial count, and a config hash.
The CSVs are the contract; ``--plot`` renders optional PNG convenience views.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import catch, channel, simulator, splitting
from .geometry import DistanceLaw
from .params import (ConfigError, ScenarioConfig, apply_overrides,
                     config_hash, load_config)

SCHEMA_VERSION = 1

FIG3_PA_WATTS = [0.1, 0.5, 1.0, 1.5, 2.0]
FIG3_M_BITS = [300, 400, 500, 600, 700]
FIG3_U_METERS = [800, 1000, 1200, 1400, 1600]
FIG3_L_MAX = 100
FIG5_N_MAX = 30
CASE_N_GRID = list(range(1, 16))
CASE1_LAMBDAS = [0.01, 0.04, 0.06, 0.1]
CASE1_M_BITS = [300, 400, 500, 600]
CASE2_M_BITS = [300, 600, 900, 1200]
VERIFY_L_GRID = [2, 5, 8, 10, 15, 25, 40, 60, 80, 100]

DEFAULT_TRIALS = {
    "rate": channel.DEFAULT_RATE_TRIALS,
    "distlaw": 0,
    "sweep-window": 0,
    "optimize-window": 0,
    "sweep-chunks": 0,
    "optimize-chunks": 0,
    "case1": 2000,
    "case2": 2000,
    "verify": 100_000,
    "fig3": 0,
    "fig4": 0,
    "fig5": 0,
    "fig6": 2000,
    "fig7": 2000,
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def write_csv(path: Path, header: list[str], rows, cfg: ScenarioConfig,
              seed: int, trials: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    lines.append(f"# schema={SCHEMA_VERSION}")
    lines.append(f"# seed={seed} trials={trials} config_hash={config_hash(cfg)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _maybe_plot(args, csv_path: Path, x_col: int, y_col: int,
                group_col: int | None = None) -> None:
    if not args.plot:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [line.split(",") for line in csv_path.read_text().splitlines()
            if line and not line.startswith("#")]
    header, data = rows[0], rows[1:]
    fig, ax = plt.subplots(figsize=(6, 4))
    if group_col is None:
        xs = [float(r[x_col]) for r in data]
        ys = [float(r[y_col]) for r in data]
        ax.plot(xs, ys, marker=".")
    else:
        groups = sorted({r[group_col] for r in data}, key=float)
        for g in groups:
            sub = [r for r in data if r[group_col] == g]
            ax.plot([float(r[x_col]) for r in sub],
                    [float(r[y_col]) for r in sub],
                    marker=".", label=f"{header[group_col]}={g}")
        ax.legend(fontsize=8)
    ax.set_xlabel(header[x_col])
    ax.set_ylabel(header[y_col])
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(csv_path.with_suffix(".png"), dpi=120)
    plt.close(fig)


def _resolve_config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else load_config(
        {"defaults": "table1"})
    return apply_overrides(cfg, args.set or [])


def _rate(cfg: ScenarioConfig, seed: int) -> float:
    return channel.average_rate(cfg, seed=seed).mean_rate


# --- subcommand handlers -------------------------------------------------

def cmd_rate(args, cfg, out: Path) -> None:
    est = channel.average_rate(cfg, trials=max(args.trials, 1), seed=args.seed)
    write_csv(out / "rate.csv",
              ["mean_rate", "std_error", "trials", "seed", "degenerate"],
              [[est.mean_rate, est.std_error, est.trials, est.seed,
                est.degenerate]],
              cfg, args.seed, est.trials)


def cmd_distlaw(args, cfg, out: Path) -> None:
    law = DistanceLaw(cfg.u)
    n_pts = 201
    rows = []
    for k in range(n_pts):
        d = law.d_max * k / (n_pts - 1)
        rows.append([d, law.pdf(d), law.cdf(d), law.partial_first_moment(d)])
    path = out / "distlaw.csv"
    write_csv(path, ["d", "pdf", "cdf", "partial_first_moment"], rows,
              cfg, args.seed, 0)
    _maybe_plot(args, path, 0, 1)


def cmd_sweep_window(args, cfg, out: Path) -> None:
    r_bar = _rate(cfg, args.seed)
    rows = []
    breakdown = []
    for l in range(1, args.l_max + 1):
        bd = catch.catch_probability(l, cfg, r_bar, mode=args.mode)
        rows.append([l, bd.p_ca, "analytic", 0.0])
        if args.verbose:
            for st in bd.strata:
                breakdown.append([l, st.s, st.d1, st.d2, st.p_dis, st.d_bar,
                                  st.p_md, st.p_catch_given_s])
    if args.trials > 0:
        for l in range(1, args.l_max + 1, max(1, args.l_max // 10)):
            est = simulator.estimate_catch(cfg, l, cfg.m_symbols, r_bar,
                                           args.trials, args.seed,
                                           random_phase=args.random_phase)
            rows.append([l, est.p_hat, "mc", est.ci_halfwidth])
    path = out / "sweep_window.csv"
    write_csv(path, ["L", "p_ca", "source", "ci"], rows, cfg, args.seed,
              args.trials)
    if args.verbose:
        write_csv(out / "sweep_window_strata.csv",
                  ["L", "s", "d1", "d2", "p_dis", "d_bar", "p_md",
                   "p_catch_given_s"],
                  breakdown, cfg, args.seed, args.trials)
    _maybe_plot(args, path, 0, 1)


def cmd_optimize_window(args, cfg, out: Path) -> None:
    r_bar = _rate(cfg, args.seed)
    l_star, p_star = catch.optimal_window(cfg, r_bar, args.l_max,
                                          mode=args.mode)
    rows = []
    for l in range(1, args.l_max + 1):
        p = catch.catch_probability(l, cfg, r_bar, mode=args.mode).p_ca
        rows.append([l, p, l == l_star])
    write_csv(out / "optimize_window.csv", ["L", "p_ca", "is_optimal"],
              rows, cfg, args.seed, args.trials)


def cmd_sweep_chunks(args, cfg, out: Path) -> None:
    r_bar = _rate(cfg, args.seed)
    rows = []
    for n in range(1, args.n_max + 1):
        plan = splitting.overall_catch_probability(n, args.window, cfg, r_bar,
                                                   mode=args.mode)
        rows.append([n, plan.p_ov, "analytic", 0.0])
    if args.trials > 0:
        for n in range(1, args.n_max + 1, max(1, args.n_max // 10)):
            est = simulator.estimate_overall_catch(cfg, n, args.window, r_bar,
                                                   args.trials, args.seed,
                                                   random_phase=args.random_phase)
            rows.append([n, est.p_hat, "mc", est.ci_halfwidth])
    path = out / "sweep_chunks.csv"
    write_csv(path, ["n", "p_ov", "source", "ci"], rows, cfg, args.seed,
              args.trials)
    _maybe_plot(args, path, 0, 1)


def cmd_optimize_chunks(args, cfg, out: Path) -> None:
    r_bar = _rate(cfg, args.seed)
    n_star, p_star = splitting.optimal_chunks(cfg, args.window, r_bar,
                                              n_max=args.n_max, mode=args.mode)
    rows = []
    for n in range(1, args.n_max + 1):
        p = splitting.overall_catch_probability(n, args.window, cfg, r_bar,
                                                mode=args.mode).p_ov
        rows.append([n, p, n == n_star])
    write_csv(out / "optimize_chunks.csv", ["n", "p_ov", "is_optimal"],
              rows, cfg, args.seed, args.trials)


def _cmd_case(args, cfg, out: Path, which: int) -> None:
    r_bar = _rate(cfg, args.seed)
    runner = simulator.run_case1 if which == 1 else simulator.run_case2
    rows = []
    for n in CASE_N_GRID[:args.n_max]:
        stats = runner(cfg, n, args.window, r_bar, args.trials, args.seed,
                       random_phase=args.random_phase)
        rows.append([n, stats.mean_covert, stats.ci_halfwidth,
                     stats.mean_caught_events])
    path = out / f"case{which}.csv"
    write_csv(path, ["n", "covert_messages", "ci", "caught_events"], rows,
              cfg, args.seed, args.trials)
    _maybe_plot(args, path, 0, 1)


def cmd_case1(args, cfg, out: Path) -> None:
    _cmd_case(args, cfg, out, 1)


def cmd_case2(args, cfg, out: Path) -> None:
    _cmd_case(args, cfg, out, 2)


def cmd_verify(args, cfg, out: Path) -> None:
    r_bar = _rate(cfg, args.seed)
    law = DistanceLaw(cfg.u)
    trials = args.trials
    rows = []

    # postponement frequency against the distance-law CDF at the observation radius
    p_as = splitting.postponement_probability(cfg.r_a_proj, law)
    est = simulator.estimate_catch(cfg, 10, cfg.m_symbols, r_bar, trials,
                                   args.seed)
    freq = est.n_postponed / trials
    se = math.sqrt(max(p_as * (1 - p_as), 1e-12) / trials)
    rows.append(["postponement", p_as, freq, p_as - 3 * se, p_as + 3 * se,
                 abs(freq - p_as) <= 3 * se])

    # empirical pair-distance distribution against the closed-form CDF
    rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed,
                                                       spawn_key=(999,)))
    sample = np.sort(law.sample_pair_distance(rng, size=max(trials, 10_000)))
    grid = np.arange(1, sample.size + 1) / sample.size
    cdf_vals = np.array([law.cdf(min(d, law.d_max)) for d in sample])
    ks = float(np.max(np.abs(grid - cdf_vals)))
    ks_tol = 0.01 if sample.size >= 100_000 else 1.36 / math.sqrt(sample.size) * 3
    rows.append(["distance_ks", 0.0, ks, 0.0, ks_tol, ks <= ks_tol])

    # analytic catch probability vs the slot simulator, both distance modes
    for l in VERIFY_L_GRID:
        mc = simulator.estimate_catch(cfg, l, cfg.m_symbols, r_bar, trials,
                                      args.seed,
                                      random_phase=args.random_phase)
        cm = catch.catch_probability(l, cfg, r_bar, mode="conditional-mean").p_ca
        pl = catch.catch_probability(l, cfg, r_bar, mode="paper-literal").p_ca
        rows.append([f"p_ca_condmean_L{l}", cm, mc.p_hat, mc.ci_low,
                     mc.ci_high, mc.ci_low <= cm <= mc.ci_high])
        rows.append([f"p_ca_paperliteral_L{l}", pl, mc.p_hat, mc.ci_low,
                     mc.ci_high, mc.ci_low <= pl <= mc.ci_high])
    write_csv(out / "verify.csv",
              ["quantity", "analytic", "mc_mean", "ci_low", "ci_high",
               "passed"],
              rows, cfg, args.seed, trials)


def _fig3_panels(cfg: ScenarioConfig):
    return [
        ("pa", "p_a_w",
         [(v, cfg.replace(p_a_dbw=10.0 * math.log10(v))) for v in FIG3_PA_WATTS]),
        ("m", "m_bits", [(v, cfg.replace(m_bits=v)) for v in FIG3_M_BITS]),
        ("u", "u", [(v, cfg.replace(u=float(v))) for v in FIG3_U_METERS]),
    ]


def cmd_fig3(args, cfg, out: Path) -> None:
    for panel, col, variants in _fig3_panels(cfg):
        rows = []
        for value, vcfg in variants:
            r_bar = _rate(vcfg, args.seed)
            for l in range(1, FIG3_L_MAX + 1):
                p = catch.catch_probability(l, vcfg, r_bar, mode=args.mode).p_ca
                rows.append([value, l, p, "analytic", 0.0])
            if args.trials > 0:
                for l in range(1, FIG3_L_MAX + 1, 10):
                    est = simulator.estimate_catch(vcfg, l, vcfg.m_symbols,
                                                   r_bar, args.trials,
                                                   args.seed,
                                                   random_phase=args.random_phase)
                    rows.append([value, l, est.p_hat, "mc", est.ci_halfwidth])
        path = out / f"fig3_{panel}.csv"
        write_csv(path, [col, "L", "p_ca", "source", "ci"], rows, cfg,
                  args.seed, args.trials)
        _maybe_plot(args, path, 1, 2, group_col=0)


def cmd_fig4(args, cfg, out: Path) -> None:
    for panel, col, variants in _fig3_panels(cfg):
        rows = []
        for value, vcfg in variants:
            r_bar = _rate(vcfg, args.seed)
            l_star, p_star = catch.optimal_window(vcfg, r_bar, FIG3_L_MAX,
                                                  mode=args.mode)
            rows.append([value, l_star, p_star])
        path = out / f"fig4_{panel}.csv"
        write_csv(path, [col, "l_star", "p_ca_star"], rows, cfg, args.seed,
                  args.trials)


def cmd_fig5(args, cfg, out: Path) -> None:
    for panel, col, variants in _fig3_panels(cfg):
        rows = []
        for value, vcfg in variants:
            r_bar = _rate(vcfg, args.seed)
            for n in range(1, FIG5_N_MAX + 1):
                plan = splitting.overall_catch_probability(
                    n, args.window, vcfg, r_bar, mode=args.mode)
                rows.append([value, n, plan.p_ov, "analytic", 0.0])
            if args.trials > 0:
                for n in range(1, FIG5_N_MAX + 1, 3):
                    est = simulator.estimate_overall_catch(
                        vcfg, n, args.window, r_bar, args.trials, args.seed,
                        random_phase=args.random_phase)
                    rows.append([value, n, est.p_hat, "mc", est.ci_halfwidth])
        path = out / f"fig5_{panel}.csv"
        write_csv(path, [col, "n", "p_ov", "source", "ci"], rows, cfg,
                  args.seed, args.trials)
        _maybe_plot(args, path, 1, 2, group_col=0)


def cmd_fig6(args, cfg, out: Path) -> None:
    base = cfg.replace(r_w_proj=120.0)
    panels = [
        ("m", "m_bits", [(v, base.replace(m_bits=v)) for v in CASE1_M_BITS]),
        ("lambda", "lambda_per_min",
         [(v, base.replace(lambda_per_min=v)) for v in CASE1_LAMBDAS]),
    ]
    for panel, col, variants in panels:
        rows = []
        for value, vcfg in variants:
            r_bar = _rate(vcfg, args.seed)
            for n in CASE_N_GRID[:args.n_max]:
                stats = simulator.run_case1(vcfg, n, args.window, r_bar,
                                            args.trials, args.seed,
                                            random_phase=args.random_phase)
                rows.append([value, n, stats.mean_covert, stats.ci_halfwidth])
        path = out / f"fig6_{panel}.csv"
        write_csv(path, [col, "n", "covert_messages", "ci"], rows, cfg,
                  args.seed, args.trials)
        _maybe_plot(args, path, 1, 2, group_col=0)


def cmd_fig7(args, cfg, out: Path) -> None:
    panels = [
        ("m", "m_bits", [(v, cfg.replace(m_bits=v)) for v in CASE2_M_BITS]),
        ("lambda", "lambda_per_min",
         [(v, cfg.replace(m_bits=900, lambda_per_min=v))
          for v in CASE1_LAMBDAS]),
    ]
    for panel, col, variants in panels:
        rows = []
        for value, vcfg in variants:
            r_bar = _rate(vcfg, args.seed)
            for n in CASE_N_GRID[:args.n_max]:
                stats = simulator.run_case2(vcfg, n, args.window, r_bar,
                                            args.trials, args.seed,
                                            random_phase=args.random_phase)
                rows.append([value, n, stats.mean_covert, stats.ci_halfwidth])
        path = out / f"fig7_{panel}.csv"
        write_csv(path, [col, "n", "covert_messages", "ci"], rows, cfg,
                  args.seed, args.trials)
        _maybe_plot(args, path, 1, 2, group_col=0)


HANDLERS = {
    "rate": cmd_rate,
    "distlaw": cmd_distlaw,
    "sweep-window": cmd_sweep_window,
    "optimize-window": cmd_optimize_window,
    "sweep-chunks": cmd_sweep_chunks,
    "optimize-chunks": cmd_optimize_chunks,
    "case1": cmd_case1,
    "case2": cmd_case2,
    "verify": cmd_verify,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "fig5": cmd_fig5,
    "fig6": cmd_fig6,
    "fig7": cmd_fig7,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a key-value config file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a single config field (repeatable)")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--trials", type=int, default=None,
                        help="Monte-Carlo trials; 0 means analytic-only")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--mode", default="paper-literal",
                        choices=["paper-literal", "conditional-mean"],
                        help="representative-distance mode for analytics")
    common.add_argument("--random-phase", action="store_true",
                        help="randomize the first detection attempt offset")
    common.add_argument("--plot", action="store_true",
                        help="also render PNG plots next to the CSVs")

    parser = argparse.ArgumentParser(
        prog="covertsim",
        description="Catch-probability analysis for a satellite covert link "
                    "watched by a UAV warden")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        p = sub.add_parser(name, parents=[common])
        if name in ("sweep-window", "optimize-window"):
            p.add_argument("--l-max", type=int, default=100)
        if name in ("sweep-chunks", "optimize-chunks"):
            p.add_argument("--n-max", type=int, default=30)
            p.add_argument("--window", type=int, default=10,
                           help="fixed detection window size L")
        if name in ("case1", "case2", "fig6", "fig7"):
            p.add_argument("--n-max", type=int, default=len(CASE_N_GRID))
            p.add_argument("--window", type=int, default=10)
        if name == "fig5":
            p.add_argument("--window", type=int, default=10)
        if name == "sweep-window":
            p.add_argument("--verbose", action="store_true",
                           help="also write the per-stratum breakdown")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trials is None:
        args.trials = DEFAULT_TRIALS[args.command]
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        HANDLERS[args.command](args, cfg, Path(args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
