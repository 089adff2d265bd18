#!/usr/bin/env python3
"""Reproduce every figure CSV (and optional plots) at publication scale.

Runs the five figure subcommands with a fixed seed into ``out/figures``.
Pass ``--quick`` for a desk-scale run (smaller Monte-Carlo budgets), and
``--plot`` to also render PNGs (requires matplotlib).
"""
import argparse
import sys

from covertsim.cli import main


def run(args):
    extra = ["--seed", str(args.seed), "--out", args.out]
    if args.plot:
        extra.append("--plot")
    jobs = [
        ["fig3"],
        ["fig4", "--trials", "20000" if args.quick else "100000"],
        ["fig5"],
        ["fig6", "--trials", "2000" if args.quick else "10000"],
        ["fig7", "--trials", "2000" if args.quick else "10000"],
    ]
    for job in jobs:
        print("::", " ".join(job))
        code = main(job + extra)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="out/figures")
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--plot", action="store_true")
    sys.exit(run(ap.parse_args()))
