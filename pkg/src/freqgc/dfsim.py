"""Monte Carlo of the Dickey-Fuller t-statistic under a unit-root null.

Run ``python -m freqgc.dfsim`` to regenerate ``data/df_critical_values.csv``.
The table is generated once and committed; nothing here runs at import time
of the test code paths.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

SAMPLE_SIZES = (25, 50, 100, 150, 250, 400, 600, 1000, 2000)
ALPHAS = (0.01, 0.05, 0.10)
TRENDS = ("c", "ct")
DEFAULT_REPS = 100_000
DEFAULT_SEED = 19790601

TABLE_PATH = Path(__file__).with_name("data") / "df_critical_values.csv"


def _deterministic_basis(n: int, trend: str) -> np.ndarray:
    cols = [np.ones(n)]
    if trend == "ct":
        cols.append(np.arange(1, n + 1, dtype=float))
    q, _ = np.linalg.qr(np.column_stack(cols))
    return q


def df_tstats(T: int, trend: str, reps: int, rng: np.random.Generator,
              batch: int = 2000) -> np.ndarray:
    """Simulate ``reps`` DF t-ratios for random walks of length ``T``.

    The regression is ``dy_t = a [+ b t] + rho y_{t-1} + e_t`` over t = 1..T-1,
    evaluated for a whole batch at once via Frisch-Waugh.
    """
    n = T - 1
    q = _deterministic_basis(n, trend)
    k = q.shape[1] + 1
    out = np.empty(reps)
    done = 0
    while done < reps:
        b = min(batch, reps - done)
        y = np.cumsum(rng.standard_normal((b, T)), axis=1)
        dy = np.diff(y, axis=1)
        ylag = y[:, :-1]
        ylag = ylag - (ylag @ q) @ q.T
        dy = dy - (dy @ q) @ q.T
        sxx = np.einsum("ij,ij->i", ylag, ylag)
        beta = np.einsum("ij,ij->i", ylag, dy) / sxx
        resid = dy - beta[:, None] * ylag
        s2 = np.einsum("ij,ij->i", resid, resid) / (n - k)
        out[done:done + b] = beta / np.sqrt(s2 / sxx)
        done += b
    return out


def simulate_table(reps: int = DEFAULT_REPS, seed: int = DEFAULT_SEED):
    rows = []
    root = np.random.SeedSequence(seed)
    streams = root.spawn(len(TRENDS) * len(SAMPLE_SIZES))
    i = 0
    for trend in TRENDS:
        for T in SAMPLE_SIZES:
            rng = np.random.Generator(np.random.Philox(streams[i]))
            i += 1
            stats = df_tstats(T, trend, reps, rng)
            for alpha in ALPHAS:
                rows.append((trend, T, alpha, float(np.quantile(stats, alpha))))
    return rows


def write_table(rows, path: Path, reps: int, seed: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# Dickey-Fuller t-ratio quantiles under a Gaussian random-walk null.\n")
        fh.write(f"# Generated by freqgc.dfsim: reps={reps} per (spec, T), "
                 f"seed={seed}, Philox streams.\n")
        fh.write("# spec: c = constant only, ct = constant plus linear trend.\n")
        fh.write("# T: series length (regression uses T-1 differences).\n")
        fh.write("# alpha: left-tail probability; value: quantile.\n")
        fh.write("spec,T,alpha,value\n")
        for trend, T, alpha, value in rows:
            fh.write(f"{trend},{T},{alpha:.2f},{value:.5f}\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=DEFAULT_REPS)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--out", type=Path, default=TABLE_PATH)
    args = parser.parse_args(argv)
    if args.reps < 50_000:
        print("warning: fewer than 50,000 replications", file=sys.stderr)
    rows = simulate_table(args.reps, args.seed)
    write_table(rows, args.out, args.reps, args.seed)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
