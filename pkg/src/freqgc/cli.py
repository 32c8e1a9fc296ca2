"""Command line entry point: ``freqgc unitroot | test | mc``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import Direction, SpectralConfig
from .errors import InputError, NumericalError
from .ingest import load_csv
from .pipeline import run_pipeline
from .report import emit_report
from .stationarity import TrendSpec, adf_test, pp_test
from .synthetic import TransferGenerator, mc_study

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


def _order(text: str) -> tuple:
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q but got {text!r}") from None
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("ARMA orders must be non-negative")
    return p, q


def _lag(text: str):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--m takes an integer or 'auto'") from None


def _floats(text: str) -> tuple:
    if not text.strip():
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from None


def _add_ingest_args(p):
    p.add_argument("--date-col", default="date", help="date column name (default: date)")
    p.add_argument("--date-format", default="%Y-%m", help="strptime format (default: %%Y-%%m)")
    p.add_argument("--na-drop", action="store_true",
                   help="trim leading/trailing missing or sentinel rows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freqgc", description="Frequency-domain Granger causality.")
    parser.add_argument("--version", action="version", version=f"freqgc {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ur = sub.add_parser("unitroot", help="ADF and PP tests for one series")
    ur.add_argument("--file", required=True, type=Path)
    ur.add_argument("--col", required=True)
    ur.add_argument("--max-lag", type=int, default=None)
    _add_ingest_args(ur)

    t = sub.add_parser("test", help="Granger coherence between two series")
    t.add_argument("--x", required=True, type=Path, help="CSV holding the cause series")
    t.add_argument("--xcol", required=True)
    t.add_argument("--y", required=True, type=Path, help="CSV holding the effect series")
    t.add_argument("--ycol", required=True)
    t.add_argument("--direction", choices=[d.value for d in Direction], default="x->y")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--m", type=_lag, default=None, help="lag window M or 'auto' (round(sqrt(T)))")
    t.add_argument("--grid", type=int, default=256)
    t.add_argument("--band-split", type=float, default=0.52)
    t.add_argument("--arma-x", type=_order, default=None, metavar="P,Q")
    t.add_argument("--arma-y", type=_order, default=None, metavar="P,Q")
    t.add_argument("--no-svg", action="store_true")
    t.add_argument("--out", required=True, type=Path)
    _add_ingest_args(t)

    mc = sub.add_parser("mc", help="Monte Carlo size/power of the test")
    mc.add_argument("--coeffs", type=_floats, default=(), help="transfer coefficients b1,b2,...")
    mc.add_argument("--T", type=int, default=600)
    mc.add_argument("--m", type=_lag, default=None)
    mc.add_argument("--alpha", type=float, default=0.05)
    mc.add_argument("--grid", type=int, default=256)
    mc.add_argument("--reps", type=int, default=1000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--cause-std", type=float, default=1.0)
    mc.add_argument("--noise-std", type=float, default=1.0)
    mc.add_argument("--whiten", action="store_true", help="prewhiten each replication")
    mc.add_argument("--workers", type=int, default=1)
    mc.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")
    return parser


def _cmd_unitroot(args) -> int:
    s = load_csv(args.file, args.col, args.date_col, args.date_format, args.na_drop)
    print(f"{s.name}: {s.start}..{s.end}, T={len(s)}")
    for trend in TrendSpec:
        a = adf_test(s.values, trend, args.max_lag)
        p = pp_test(s.values, trend)
        print(f"  {trend.label:<8} ADF {a.statistic:9.3f} (lag {a.selected_lag}, 5% cv "
              f"{a.critical_values[0.05]:.3f}) {'reject' if a.reject_unit_root_5pct else 'no reject'}"
              f" | PP {p.statistic:9.3f} (bw {p.bandwidth}, 5% cv {p.critical_values[0.05]:.3f}) "
              f"{'reject' if p.reject_unit_root_5pct else 'no reject'}")
    return EXIT_OK


def _cmd_test(args) -> int:
    x = load_csv(args.x, args.xcol, args.date_col, args.date_format, args.na_drop)
    y = load_csv(args.y, args.ycol, args.date_col, args.date_format, args.na_drop)
    config = SpectralConfig(alpha=args.alpha, M=args.m, grid_size=args.grid,
                            band_split=args.band_split, arma_x=args.arma_x, arma_y=args.arma_y,
                            direction=args.direction)
    extra = {"ingest": {"xcol": args.xcol, "ycol": args.ycol, "date_col": args.date_col,
                        "date_format": args.date_format, "na_drop": args.na_drop}}
    report = run_pipeline(x, y, config, inputs={"x": args.x, "y": args.y}, extra=extra)
    for path in emit_report(report, args.out, svg=not args.no_svg):
        print(path)
    for r in report.results:
        print(f"{r.curve.label}: long-term {r.bands.long.verdict}, short-term {r.bands.short.verdict}")
    return EXIT_OK


def _cmd_mc(args) -> int:
    gen = TransferGenerator(args.coeffs, args.cause_std, args.noise_std, args.T, args.seed)
    config = SpectralConfig(alpha=args.alpha, M=args.m, grid_size=args.grid, full_coherence=False)
    summary = mc_study(gen, config, args.reps, whiten=args.whiten, workers=args.workers)
    text = summary.to_csv()
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    handler = {"unitroot": _cmd_unitroot, "test": _cmd_test, "mc": _cmd_mc}[args.command]
    try:
        return handler(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
