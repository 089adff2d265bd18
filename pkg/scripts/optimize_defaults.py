#!/usr/bin/env python3
"""Print the optimal detection window and chunk split at the default scenario.

Accepts the same ``--set key=value`` overrides as the CLI, so it doubles as a
quick what-if tool, e.g.::

    python3 scripts/optimize_defaults.py --set m_bits=900 --set u=1200
"""
import argparse

from covertsim import (apply_overrides, average_rate, load_config,
                       optimal_chunks, optimal_window,
                       overall_catch_probability)


def run(args):
    cfg = load_config({"defaults": "table1"})
    if args.set:
        cfg = apply_overrides(cfg, args.set)
    rate = average_rate(cfg, trials=args.rate_trials, seed=args.seed)
    print(f"average rate     R̄ = {rate.mean_rate:.4f} symbols/s "
          f"(± {rate.std_error:.4f}, {rate.trials} draws)")
    l_star, p_star = optimal_window(cfg, rate.mean_rate, args.l_max,
                                    mode=args.mode)
    print(f"warden optimum   L* = {l_star}   P_ca = {p_star:.4f}")
    n_star, p_ov = optimal_chunks(cfg, args.window, rate.mean_rate,
                                  n_max=args.n_max, mode=args.mode)
    plan = overall_catch_probability(n_star, args.window, cfg,
                                     rate.mean_rate, mode=args.mode)
    print(f"sender optimum   n* = {n_star}   P_ov = {p_ov:.4f} "
          f"(chunk {plan.chunk_symbols:.1f} symbols, "
          f"P_as = {plan.p_as:.4f})")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--set", action="append", default=[],
                    metavar="KEY=VALUE")
    ap.add_argument("--mode", default="paper-literal",
                    choices=["paper-literal", "conditional-mean"])
    ap.add_argument("--window", type=int, default=10,
                    help="detection window used for the chunk sweep")
    ap.add_argument("--l-max", type=int, default=100)
    ap.add_argument("--n-max", type=int, default=30)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--rate-trials", type=int, default=200_000)
    run(ap.parse_args())
