#!/usr/bin/env python3
"""Run the analytic-vs-Monte-Carlo verification report.

Writes ``verify.csv`` (quantity, analytic, mc_mean, ci bounds, pass flag)
under ``out/verify`` and exits non-zero if any row fails.
"""
import argparse
import csv
import sys
from pathlib import Path

from covertsim.cli import main


def run(args):
    out = Path(args.out)
    code = main(["verify", "--seed", str(args.seed),
                 "--trials", str(args.trials), "--out", str(out)])
    if code != 0:
        return code
    with open(out / "verify.csv", newline="") as fh:
        rows = [r for r in csv.reader(fh)
                if r and not r[0].startswith("#")][1:]
    failed = [r for r in rows if r[5] != "true"]
    for r in rows:
        status = "ok  " if r[5] == "true" else "FAIL"
        print(f"{status} {r[0]:<24} analytic={r[1]:<12} "
              f"mc=[{r[3]}, {r[4]}]")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--out", default="out/verify")
    sys.exit(run(ap.parse_args()))
