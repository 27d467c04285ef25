"""Replicated simulate -> estimate -> recover -> test experiments.

Each replication r of an experiment runs the whole verification pipeline
on a freshly simulated path using the stream derived from (seed, r), so a
run is deterministic in (config, seed) no matter how many workers execute
it: results are reduced in replication order and no generator is shared.

A replication whose estimator or fit degenerates is counted as invalid and
excluded from the rejection-rate denominator rather than silently biasing
it; the invalid count is part of the result.  When the DMB estimator meets
a nonpositive path value the replication falls back to LSB and the
fallback count is reported.
"""

from __future__ import annotations

import shlex
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path as FsPath

import numpy as np

from .car1 import Car1Params, SamplingGrid, simulate_path
from .disttest import FAMILIES, procedure1_bm_test, procedure2_gof_test
from .errors import (
    DegenerateSampleError,
    DomainError,
    FitError,
    PositivityError,
)
from .estimators import DMB, LSB, dmb_estimate, lsb_estimate
from .levy import DrivingKind, LevyParams
from .recovery import recover_increments
from .rng import derive_stream
from .whiteness import w_statistic

W_TEST = "w"
PROC1 = "proc1"
PROC2 = "proc2"
TESTS = (W_TEST, PROC1, PROC2)


def recommended_estimator(kind: DrivingKind, test: str = W_TEST) -> str:
    """Default estimator: LSB when Brownian noise is in play, DMB otherwise.

    Procedure 1 always prescribes LSB because it tests for Brownian motion;
    for the other tests a subordinator driver gets the more accurate DMB.
    """
    if test == PROC1 or kind is DrivingKind.BROWNIAN:
        return LSB
    return DMB


@dataclass(frozen=True)
class ExperimentConfig:
    """One cell of a level or power experiment."""

    kind: DrivingKind
    levy: LevyParams
    a: float
    grid: SamplingGrid
    replications: int = 400
    alpha: float = 0.05
    estimator: str = LSB
    test: str = W_TEST
    family: str | None = None
    sigma: float = 1.0
    seed: int = 0
    substeps: int = 10
    bootstrap_count: int = 1000
    exact_bm: bool = True
    mixed_weight: float = 0.5
    lag: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        if self.estimator not in (LSB, DMB):
            raise DomainError(f"unknown estimator {self.estimator!r}")
        if self.test not in TESTS:
            raise DomainError(f"unknown test {self.test!r}")
        if self.test == PROC2:
            if self.family not in FAMILIES:
                raise DomainError(f"proc2 requires a family out of {FAMILIES}")


@dataclass(frozen=True)
class RateResult:
    """Monte Carlo rejection rate with its binomial standard error."""

    rejections: int
    valid: int
    invalid: int = 0
    fallbacks: int = 0

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.valid if self.valid else float("nan")

    @property
    def standard_error(self) -> float:
        if not self.valid:
            return float("nan")
        p = self.rejection_rate
        return float(np.sqrt(p * (1.0 - p) / self.valid))


def _run_replicate(cfg: ExperimentConfig, r: int) -> tuple[str, bool]:
    """One replication; returns (outcome, used_lsb_fallback)."""
    stream = derive_stream(cfg.seed, r)
    car1 = Car1Params(a=cfg.a, sigma=cfg.sigma)
    path = simulate_path(
        car1,
        cfg.kind,
        cfg.levy,
        cfg.grid,
        stream,
        substeps=cfg.substeps,
        exact_bm=cfg.exact_bm and cfg.kind is DrivingKind.BROWNIAN,
        mixed_weight=cfg.mixed_weight,
    )
    fallback = False
    try:
        if cfg.estimator == DMB:
            try:
                est = dmb_estimate(path)
            except PositivityError:
                est = lsb_estimate(path)
                fallback = True
        else:
            est = lsb_estimate(path)
        incr = recover_increments(path, est.a_hat, cfg.sigma)
        if cfg.test == W_TEST:
            reject = w_statistic(incr, lag=cfg.lag, alpha=cfg.alpha).reject
        elif cfg.test == PROC1:
            reject = procedure1_bm_test(incr.values, stream, alpha=cfg.alpha).reject
        else:
            reject = procedure2_gof_test(
                incr.values, cfg.family, stream, bootstrap_count=cfg.bootstrap_count
            ).reject
    except (DegenerateSampleError, FitError):
        return "invalid", fallback
    return ("reject" if reject else "accept"), fallback


def _worker(args: tuple[ExperimentConfig, int]) -> tuple[str, bool]:
    return _run_replicate(*args)


def run_level(cfg: ExperimentConfig, threads: int = 1) -> RateResult:
    """Rejection rate of the configured test over all replications."""
    r_total = cfg.replications
    if threads <= 1:
        outcomes = [_run_replicate(cfg, r) for r in range(r_total)]
    else:
        chunk = max(1, r_total // (threads * 8))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(
                pool.map(_worker, ((cfg, r) for r in range(r_total)), chunksize=chunk)
            )
    rejections = sum(1 for o, _ in outcomes if o == "reject")
    invalid = sum(1 for o, _ in outcomes if o == "invalid")
    fallbacks = sum(1 for _, f in outcomes if f)
    return RateResult(
        rejections=rejections,
        valid=r_total - invalid,
        invalid=invalid,
        fallbacks=fallbacks,
    )


def run_power(cfg: ExperimentConfig, threads: int = 1) -> RateResult:
    """Identical engine to ``run_level``; named for mismatched-family cells."""
    return run_level(cfg, threads)


# --- table runs ---------------------------------------------------------------

_TABLE_KEYS = {
    "driver",
    "mu",
    "eta2",
    "a",
    "sigma",
    "n",
    "m",
    "r",
    "alpha",
    "estimator",
    "test",
    "family",
    "substeps",
    "bootstrap",
    "seed",
    "exact_bm",
    "weight",
    "lag",
}


def config_from_pairs(pairs: dict[str, str], default_seed: int = 0) -> ExperimentConfig:
    """Build a config from the key=value vocabulary of a table-spec line."""
    unknown = set(pairs) - _TABLE_KEYS
    if unknown:
        raise DomainError(f"unknown table keys: {sorted(unknown)}")
    if "driver" not in pairs or "a" not in pairs or "n" not in pairs or "m" not in pairs:
        raise DomainError("each table line needs at least driver=, a=, n= and m=")
    kind = DrivingKind(pairs["driver"])
    test = pairs.get("test", W_TEST)
    estimator = pairs.get("estimator") or recommended_estimator(kind, test)
    return ExperimentConfig(
        kind=kind,
        levy=LevyParams(float(pairs.get("mu", 1.0)), float(pairs.get("eta2", 1.0))),
        a=float(pairs["a"]),
        grid=SamplingGrid(int(pairs["n"]), int(pairs["m"])),
        replications=int(pairs.get("r", 400)),
        alpha=float(pairs.get("alpha", 0.05)),
        estimator=estimator,
        test=test,
        family=pairs.get("family"),
        sigma=float(pairs.get("sigma", 1.0)),
        seed=int(pairs.get("seed", default_seed)),
        substeps=int(pairs.get("substeps", 10)),
        bootstrap_count=int(pairs.get("bootstrap", 1000)),
        exact_bm=pairs.get("exact_bm", "true").lower() in ("1", "true", "yes"),
        mixed_weight=float(pairs.get("weight", 0.5)),
        lag=int(pairs.get("lag", 1)),
    )


def parse_table_file(path: FsPath | str, default_seed: int = 0) -> list[ExperimentConfig]:
    """Parse a plain-text table spec: one experiment per line, key=value pairs."""
    configs = []
    for lineno, raw in enumerate(FsPath(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        pairs = {}
        for token in shlex.split(line):
            if "=" not in token:
                raise DomainError(f"line {lineno}: expected key=value, got {token!r}")
            key, value = token.split("=", 1)
            pairs[key.strip()] = value.strip()
        try:
            configs.append(config_from_pairs(pairs, default_seed))
        except (DomainError, ValueError) as exc:
            raise DomainError(f"line {lineno}: {exc}") from exc
    return configs


def run_table(
    configs: list[ExperimentConfig], threads: int = 1
) -> list[tuple[ExperimentConfig, RateResult]]:
    """Run every cell of a table spec; cells execute sequentially."""
    return [(cfg, run_level(cfg, threads)) for cfg in configs]


_COLUMNS = (
    "driver",
    "a",
    "n",
    "m",
    "estimator",
    "test",
    "family",
    "replications",
    "rejections",
    "rate",
    "se",
    "invalid",
    "fallbacks",
)


def _row(cfg: ExperimentConfig, res: RateResult) -> tuple:
    return (
        cfg.kind.value,
        cfg.a,
        cfg.grid.n_periods,
        cfg.grid.per_period,
        cfg.estimator,
        cfg.test,
        cfg.family or "",
        cfg.replications,
        res.rejections,
        f"{res.rejection_rate:.4f}",
        f"{res.standard_error:.4f}",
        res.invalid,
        res.fallbacks,
    )


def table_to_csv(rows: list[tuple[ExperimentConfig, RateResult]]) -> str:
    lines = [",".join(_COLUMNS)]
    for cfg, res in rows:
        lines.append(",".join(str(v) for v in _row(cfg, res)))
    return "\n".join(lines) + "\n"


def table_to_text(rows: list[tuple[ExperimentConfig, RateResult]]) -> str:
    data = [tuple(str(v) for v in _row(cfg, res)) for cfg, res in rows]
    widths = [
        max(len(_COLUMNS[i]), *(len(row[i]) for row in data)) if data else len(_COLUMNS[i])
        for i in range(len(_COLUMNS))
    ]
    header = "  ".join(name.ljust(w) for name, w in zip(_COLUMNS, widths))
    body = ["  ".join(val.ljust(w) for val, w in zip(row, widths)) for row in data]
    return "\n".join([header, "-" * len(header), *body]) + "\n"
