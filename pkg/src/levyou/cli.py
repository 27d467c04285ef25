"""Command-line entry point.

Subcommands cover the whole workflow: ``simulate``, ``estimate``,
``recover`` and ``verify`` for single paths; ``disttest`` for family
goodness-of-fit on a recovered increment file; ``mc-level`` / ``mc-power``
for replicated experiments; ``spread`` and ``rv`` for the price-data front
end.  Outputs are CSV/JSON files in the ``--out`` directory, with figures
rendered alongside unless ``--no-figures`` is given.

Exit codes for ``verify``: 0 fail-to-reject, 2 uncorrelatedness rejected,
3 a family test rejected, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path as FsPath

import numpy as np

from . import montecarlo as mc
from .car1 import Car1Params, SamplingGrid, simulate_path
from .data import (
    daily_returns,
    load_prices,
    pair_spread,
    path_from_series,
    read_series_csv,
    realized_volatility,
    write_series_csv,
)
from .disttest import FAMILIES, procedure1_bm_test, procedure2_gof_test
from .errors import LevyOUError
from .estimators import DMB, LSB, dmb_estimate, lsb_estimate
from .levy import DrivingKind, LevyParams
from .recovery import recover_increments
from .rng import derive_stream
from .verify import run_verification


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master seed (decimal 64-bit integer)")
    parser.add_argument("--threads", type=int, default=1, help="parallel workers for replicated runs")
    parser.add_argument("--out", type=FsPath, default=FsPath("."), help="output directory")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG figure rendering")


def _grid_flags(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--n-periods", type=int, required=required, default=None,
                        help="number of whole periods N")
    parser.add_argument("--per-period", type=int, required=required, default=None,
                        help="observations per period M")


def _driver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--driver", choices=[k.value for k in DrivingKind], required=True,
                        help="driving-noise family")
    parser.add_argument("--mu", type=float, default=1.0, help="unit-time mean rate of the noise")
    parser.add_argument("--eta2", type=float, default=1.0, help="unit-time variance rate of the noise")
    parser.add_argument("--a", type=float, required=True, help="mean-reversion rate")
    parser.add_argument("--sigma", type=float, default=1.0, help="scale of the SDE")
    parser.add_argument("--substeps", type=int, default=10,
                        help="fine sub-steps per observation interval")
    parser.add_argument("--mixed-weight", type=float, default=0.5,
                        help="gamma share of the mixed driving noise")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levyou",
        description="Verify whether a sampled series behaves like a Levy-driven "
        "Ornstein-Uhlenbeck (CAR(1)) process.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a stationary CAR(1) path to CSV")
    _common_flags(p)
    _driver_flags(p)
    _grid_flags(p, required=True)
    p.add_argument("--exact-bm", action="store_true",
                   help="exact sampled recursion (Brownian driver only)")
    p.add_argument("--burn-in", type=float, default=None, help="burn-in length in time units")
    p.add_argument("--initial", type=float, default=None, help="start value (skips burn-in)")

    p = sub.add_parser("estimate", help="estimate the mean-reversion rate from a path CSV")
    _common_flags(p)
    p.add_argument("file", type=FsPath, help="path CSV with header t,y")
    p.add_argument("--method", choices=[LSB, DMB], default=LSB, help="estimator")
    _grid_flags(p, required=False)

    p = sub.add_parser("recover", help="recover driving increments from a path CSV")
    _common_flags(p)
    p.add_argument("file", type=FsPath, help="path CSV with header t,y")
    p.add_argument("--method", choices=[LSB, DMB], default=LSB, help="estimator for the rate")
    p.add_argument("--a", type=float, default=None, help="use this rate instead of estimating")
    p.add_argument("--sigma", type=float, default=1.0, help="scale of the SDE")
    _grid_flags(p, required=False)

    p = sub.add_parser("verify", help="run the full verification pipeline on a path CSV")
    _common_flags(p)
    p.add_argument("file", type=FsPath, help="path CSV with header t,y")
    p.add_argument("--method", choices=[LSB, DMB], default=LSB, help="estimator")
    p.add_argument("--alpha", type=float, default=0.05, help="test level")
    p.add_argument("--lag", type=int, default=1, help="autocovariance lag for the W statistic")
    p.add_argument("--sigma", type=float, default=1.0, help="scale of the SDE")
    p.add_argument("--step5", nargs="*", choices=list(FAMILIES), default=["normal"],
                   help="families to test when uncorrelatedness is not rejected")
    p.add_argument("--force-step5", action="store_true",
                   help="run the family tests even after a rejection")
    p.add_argument("--bootstrap", type=int, default=1000, help="parametric bootstrap replicates")
    p.add_argument("--ks-on-resample", action="store_true",
                   help="KS distance on the bootstrap resample instead of the data")
    _grid_flags(p, required=False)

    p = sub.add_parser("disttest", help="family goodness-of-fit on an increments CSV")
    _common_flags(p)
    p.add_argument("file", type=FsPath, help="increments CSV with header n,dl")
    p.add_argument("--family", choices=list(FAMILIES), required=True, help="family to test")
    p.add_argument("--procedure", type=int, choices=[1, 2], default=None,
                   help="1 = bootstrap-parameter KS (normal only), 2 = parametric bootstrap")
    p.add_argument("--bootstrap", type=int, default=1000, help="parametric bootstrap replicates")
    p.add_argument("--alpha", type=float, default=0.05, help="test level (procedure 1)")
    p.add_argument("--ks-on-resample", action="store_true",
                   help="KS distance on the bootstrap resample instead of the data")

    for name, help_text in (
        ("mc-level", "empirical level of a test over replicated simulations"),
        ("mc-power", "empirical power of a test over replicated simulations"),
    ):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
        p.add_argument("--table", type=FsPath, default=None,
                       help="table spec file: one experiment per line, key=value pairs")
        p.add_argument("--driver", choices=[k.value for k in DrivingKind], default=None)
        p.add_argument("--mu", type=float, default=1.0)
        p.add_argument("--eta2", type=float, default=1.0)
        p.add_argument("--a", type=float, default=None)
        p.add_argument("--sigma", type=float, default=1.0)
        _grid_flags(p, required=False)
        p.add_argument("--replications", type=int, default=400)
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--estimator", choices=[LSB, DMB], default=None,
                       help="default: lsb for bm/proc1, dmb for subordinators")
        p.add_argument("--test", choices=list(mc.TESTS), default=mc.W_TEST)
        p.add_argument("--family", choices=list(FAMILIES), default=None,
                       help="target family for proc2")
        p.add_argument("--substeps", type=int, default=10)
        p.add_argument("--bootstrap", type=int, default=1000)
        p.add_argument("--lag", type=int, default=1)
        p.add_argument("--mixed-weight", type=float, default=0.5)
        p.add_argument("--no-exact-bm", action="store_true",
                       help="force sub-stepped simulation for the Brownian driver")

    p = sub.add_parser("spread", help="pair log-price spread from two price CSVs")
    _common_flags(p)
    p.add_argument("--a", type=FsPath, required=True, metavar="FILE", help="first price CSV")
    p.add_argument("--b", type=FsPath, required=True, metavar="FILE", help="second price CSV")
    p.add_argument("--column", default="close", help="price column to use")

    p = sub.add_parser("rv", help="daily realized volatility from an intraday price CSV")
    _common_flags(p)
    p.add_argument("--file", type=FsPath, required=True, help="price CSV")
    p.add_argument("--interval", default="5m", help="return interval, e.g. 5m or 300s")

    return parser


def _parse_interval_minutes(text: str) -> int:
    text = text.strip().lower()
    if text.endswith("m"):
        return int(text[:-1])
    if text.endswith("s"):
        seconds = int(text[:-1])
        if seconds % 60:
            raise LevyOUError(f"interval {text!r} is not a whole number of minutes")
        return seconds // 60
    return int(text)


def _load_path(args) -> "tuple":
    t, y = read_series_csv(args.file)
    mapping = path_from_series(y, per_period=args.per_period, n_periods=args.n_periods, t=t)
    if mapping.stride > 1:
        print(f"note: series strided by {mapping.stride} onto the grid "
              f"({mapping.used} of {mapping.available} points spanned)", file=sys.stderr)
    return mapping.path


def _write_increments(outdir: FsPath, values: np.ndarray) -> FsPath:
    f = outdir / "increments.csv"
    write_series_csv(f, values, t=np.arange(1, len(values) + 1), header=("n", "dl"))
    return f


def _cmd_simulate(args) -> int:
    kind = DrivingKind(args.driver)
    grid = SamplingGrid(args.n_periods, args.per_period)
    stream = derive_stream(args.seed, 0)
    path = simulate_path(
        Car1Params(a=args.a, sigma=args.sigma),
        kind,
        LevyParams(args.mu, args.eta2),
        grid,
        stream,
        substeps=args.substeps,
        burn_in=args.burn_in,
        initial=args.initial,
        exact_bm=args.exact_bm,
        mixed_weight=args.mixed_weight,
    )
    out = args.out / "path.csv"
    write_series_csv(out, path.values, t=path.times)
    print(f"wrote {out} ({grid.total_points} points)")
    if not args.no_figures:
        from .plots import save_series_figure

        save_series_figure(path.values, args.out / "path.png", t=path.times,
                           ylabel="Y", title=f"{kind.value} driven path, a={args.a}")
    return 0


def _cmd_estimate(args) -> int:
    path = _load_path(args)
    est = dmb_estimate(path) if args.method == DMB else lsb_estimate(path)
    print(f"{est.a_hat:.10g}")
    return 0


def _cmd_recover(args) -> int:
    path = _load_path(args)
    if args.a is not None:
        a_hat = args.a
    else:
        est = dmb_estimate(path) if args.method == DMB else lsb_estimate(path)
        a_hat = est.a_hat
    incr = recover_increments(path, a_hat, args.sigma)
    out = _write_increments(args.out, incr.values)
    print(f"wrote {out} (N={incr.n}, a={a_hat:.6g})")
    if not args.no_figures:
        from .plots import save_series_figure

        save_series_figure(incr.values, args.out / "increments_series.png",
                           t=np.arange(1, incr.n + 1), xlabel="n", ylabel="increment")
    return 0


def _cmd_verify(args) -> int:
    path = _load_path(args)
    inputs = {
        "file": str(args.file),
        "method": args.method,
        "alpha": args.alpha,
        "lag": args.lag,
        "sigma": args.sigma,
        "seed": args.seed,
        "step5": list(args.step5),
        "force_step5": args.force_step5,
        "bootstrap": args.bootstrap,
        "ks_on_resample": args.ks_on_resample,
    }
    report, increments, acf_values = run_verification(
        path,
        estimator=args.method,
        alpha=args.alpha,
        lag=args.lag,
        step5_families=tuple(args.step5),
        force_step5=args.force_step5,
        bootstrap_count=args.bootstrap,
        sigma=args.sigma,
        seed=args.seed,
        ks_on_resample=args.ks_on_resample,
        inputs=inputs,
    )
    outdir = args.out
    (outdir / "report.json").write_text(report.to_json() + "\n")
    (outdir / "report.txt").write_text(report.to_text())
    _write_increments(outdir, increments)
    write_series_csv(outdir / "acf.csv", acf_values,
                     t=np.arange(len(acf_values)), header=("lag", "acf"))
    if not args.no_figures:
        from .plots import save_acf_figure, save_points_figure, save_series_figure

        save_series_figure(increments, outdir / "increments_series.png",
                           t=np.arange(1, len(increments) + 1),
                           xlabel="n", ylabel="increment", title="recovered increments")
        save_points_figure(increments, outdir / "increments_points.png",
                           ylabel="increment", title="recovered increments")
        save_acf_figure(acf_values, report.whiteness.n, outdir / "acf.png",
                        title="sample ACF of recovered increments")
    print(report.to_text(), end="")
    print(f"report written to {outdir / 'report.json'}")
    return report.exit_code


def _cmd_disttest(args) -> int:
    _, values = read_series_csv(args.file)
    stream = derive_stream(args.seed, 0)
    procedure = args.procedure
    if procedure is None:
        procedure = 1 if args.family == "normal" else 2
    if procedure == 1:
        if args.family != "normal":
            raise LevyOUError("procedure 1 only tests the normal (Brownian) family")
        result = procedure1_bm_test(values, stream, alpha=args.alpha,
                                    ks_on_resample=args.ks_on_resample)
    else:
        result = procedure2_gof_test(values, args.family, stream,
                                     bootstrap_count=args.bootstrap)
    payload = asdict(result)
    (args.out / "disttest.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    detail = (f"p_value={result.p_value:.6g}" if result.p_value is not None
              else f"critical_95={result.critical_95:.6g}")
    print(f"family={result.family} procedure={result.procedure} "
          f"statistic={result.statistic:.6g} {detail} "
          f"decision={'REJECT' if result.reject else 'fail-to-reject'}")
    return 0


def _mc_configs(args) -> list[mc.ExperimentConfig]:
    if args.table is not None:
        return mc.parse_table_file(args.table, default_seed=args.seed)
    if args.driver is None or args.a is None or args.n_periods is None or args.per_period is None:
        raise LevyOUError("either --table or all of --driver/--a/--n-periods/--per-period are required")
    kind = DrivingKind(args.driver)
    estimator = args.estimator or mc.recommended_estimator(kind, args.test)
    return [
        mc.ExperimentConfig(
            kind=kind,
            levy=LevyParams(args.mu, args.eta2),
            a=args.a,
            grid=SamplingGrid(args.n_periods, args.per_period),
            replications=args.replications,
            alpha=args.alpha,
            estimator=estimator,
            test=args.test,
            family=args.family,
            sigma=args.sigma,
            seed=args.seed,
            substeps=args.substeps,
            bootstrap_count=args.bootstrap,
            exact_bm=not args.no_exact_bm,
            mixed_weight=args.mixed_weight,
            lag=args.lag,
        )
    ]


def _cmd_mc(args, label: str) -> int:
    configs = _mc_configs(args)
    rows = mc.run_table(configs, threads=args.threads)
    text = mc.table_to_text(rows)
    stem = label.replace("-", "_")
    (args.out / f"{stem}.csv").write_text(mc.table_to_csv(rows))
    (args.out / f"{stem}.txt").write_text(text)
    print(text, end="")
    return 0


def _cmd_spread(args) -> int:
    series_a = load_prices(args.a, column=args.column)
    series_b = load_prices(args.b, column=args.column)
    y = pair_spread(series_a, series_b)
    out = args.out / "spread.csv"
    write_series_csv(out, y)
    print(f"wrote {out} ({len(y)} joined points; "
          f"dropped {series_a.dropped}+{series_b.dropped} rows)")
    if not args.no_figures:
        from .plots import save_series_figure

        save_series_figure(y, args.out / "spread.png", ylabel="spread",
                           title="pair log-price spread")
    return 0


def _cmd_rv(args) -> int:
    minutes = _parse_interval_minutes(args.interval)
    series = load_prices(args.file, column="price")
    grouped = daily_returns(series, interval_minutes=minutes)
    rv = realized_volatility(grouped)
    out = args.out / "rv.csv"
    write_series_csv(out, rv)
    print(f"wrote {out} ({len(rv)} days at {minutes}-minute returns)")
    if not args.no_figures:
        from .plots import save_series_figure

        save_series_figure(rv, args.out / "rv.png", xlabel="day", ylabel="RV",
                           title="daily realized volatility")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    handlers = {
        "simulate": _cmd_simulate,
        "estimate": _cmd_estimate,
        "recover": _cmd_recover,
        "verify": _cmd_verify,
        "disttest": _cmd_disttest,
        "spread": _cmd_spread,
        "rv": _cmd_rv,
    }
    try:
        if args.command in ("mc-level", "mc-power"):
            return _cmd_mc(args, args.command)
        return handlers[args.command](args)
    except (LevyOUError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
