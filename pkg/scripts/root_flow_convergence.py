#!/usr/bin/env python3
"""Compare the polynomial root flow against the PDE bump evolution in W1
for a range of ensemble sizes, reusing the CLI's bump configuration."""

import argparse
import tempfile

from rootflow import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=512, help="PDE grid size")
    ap.add_argument("--counts", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--t", type=float, default=0.3)
    ap.add_argument("--out", default=None, help="output directory (default: temp)")
    args = ap.parse_args()

    cfg = cli.parse_config("")
    cfg["grid"]["n"] = args.n
    cfg["initial"]["kind"] = "bump"
    cfg["roots"]["counts"] = tuple(args.counts)
    cfg["roots"]["t"] = args.t

    out = args.out or tempfile.mkdtemp(prefix="rootflow-")
    summary = cli.cmd_roots_compare(cfg, out)
    print(f"outputs in {out}\n")
    print(f"{'roots':>6} {'W1':>10}")
    for _cat, name, value, _thr, _ok in summary.rows:
        if name.startswith("w1_n_"):
            print(f"{name.removeprefix('w1_n_'):>6} {value:>10.5f}")


if __name__ == "__main__":
    main()
