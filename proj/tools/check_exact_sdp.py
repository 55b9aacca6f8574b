#!/usr/bin/env python3
"""Compares `gamma2lab analyze --exact` with an SDP solve of

    min t  s.t.  [[A, M], [M^T, B]] is PSD,  diag(A) <= t,  diag(B) <= t

on small random 0/1 matrices. Exits 0 without checking when cvxpy is missing."""

import argparse
import json
import pathlib
import subprocess
import sys

try:
    import cvxpy as cp
    import numpy as np
except ImportError:
    print("cvxpy not available, skipped")
    sys.exit(0)


def sdp_gamma2(m):
    rows, cols = m.shape
    z = cp.Variable((rows + cols, rows + cols), symmetric=True)
    t = cp.Variable()
    cons = [z >> 0, z[:rows, rows:] == m, cp.diag(z) <= t]
    cp.Problem(cp.Minimize(t), cons).solve(solver=cp.CLARABEL)
    return t.value


def read_bmx(path):
    tokens = path.read_text().split()
    rows, cols, ones = (int(x) for x in tokens[:3])
    m = np.zeros((rows, cols))
    for k in range(ones):
        m[int(tokens[3 + 2 * k]), int(tokens[4 + 2 * k])] = 1
    return m


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tool", required=True)
    ap.add_argument("--tmp", required=True)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--tol", type=float, default=1e-5)
    args = ap.parse_args()

    tmp = pathlib.Path(args.tmp)
    tmp.mkdir(parents=True, exist_ok=True)
    worst = 0.0
    for seed in range(1, args.count + 1):
        rows, cols = 2 + seed % 5, 2 + (seed * 3) % 6
        path = tmp / f"r{seed}.bmx"
        subprocess.run([args.tool, "gen", "random", "--m", str(rows), "--n", str(cols), "--density", "0.5",
                        "--seed", str(seed), "--out", str(path)], check=True, capture_output=True)
        m = read_bmx(path)
        if not m.any():
            continue
        out = subprocess.run([args.tool, "analyze", str(path), "--exact", "--no-timings"],
                             check=True, capture_output=True, text=True).stdout
        got = float(json.loads(out)["gamma2"]["exact"])
        want = sdp_gamma2(m)
        worst = max(worst, abs(got - want))
        if abs(got - want) > args.tol * max(1.0, want):
            sys.exit(f"seed {seed}: exact {got:.9f}, sdp {want:.9f}")
    print(f"{args.count} matrices agree with the SDP, max difference {worst:.2e}")


if __name__ == "__main__":
    main()
