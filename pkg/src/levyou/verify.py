"""End-to-end verification of one sampled path, and its report.

The pipeline is: estimate the mean-reversion rate, recover the driving
increments, test their uncorrelatedness, and, when that test does not
reject (or when forced), test the increments against the requested
driving-noise families: Brownian motion through the bootstrap-parameter KS
procedure and Gamma / inverse Gaussian through the parametric bootstrap.

The report is a plain dataclass that serializes to JSON with stable key
order and parses back to an equal value.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .car1 import Path
from .disttest import GofResult, procedure1_bm_test, procedure2_gof_test
from .errors import DomainError, PositivityError
from .estimators import DMB, LSB, dmb_estimate, lsb_estimate
from .recovery import recover_increments
from .rng import derive_stream
from .whiteness import WhitenessResult, acf, w_statistic

SHORT_SERIES_PERIODS = 50


@dataclass(frozen=True)
class VerificationReport:
    """Everything the verification run produced, ready to serialize."""

    a_hat: float
    estimator: str
    used_fallback: bool
    n_periods: int
    per_period: int
    increment_mean: float
    increment_variance: float
    whiteness: WhitenessResult
    step5_ran: bool
    gof: tuple[GofResult, ...] = ()
    warnings: tuple[str, ...] = ()
    inputs: dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        """0 fail-to-reject, 2 rejected uncorrelatedness, 3 rejected a family."""
        if self.whiteness.reject:
            return 2
        if any(g.reject for g in self.gof):
            return 3
        return 0

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["gof"] = list(out["gof"])
        out["warnings"] = list(out["warnings"])
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "VerificationReport":
        data = dict(data)
        data["whiteness"] = WhitenessResult(**data["whiteness"])
        data["gof"] = tuple(GofResult(**g) for g in data["gof"])
        data["warnings"] = tuple(data["warnings"])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [
            "verification report",
            "===================",
            f"grid:                N={self.n_periods} periods, M={self.per_period} per period",
            f"rate estimate:       a_hat={self.a_hat:.6g} ({self.estimator}"
            + (", fell back from dmb)" if self.used_fallback else ")"),
            f"increment moments:   mean={self.increment_mean:.6g}, variance={self.increment_variance:.6g}",
            f"uncorrelatedness:    W({self.whiteness.lag})={self.whiteness.w_stat:.4f}, "
            f"|W|>{self.whiteness.critical:.4f} -> "
            + ("REJECT" if self.whiteness.reject else "fail to reject"),
        ]
        if self.step5_ran:
            for g in self.gof:
                detail = (
                    f"p={g.p_value:.4f}" if g.p_value is not None else f"crit95={g.critical_95:.4f}"
                )
                lines.append(
                    f"family test:         {g.family} (procedure {g.procedure}) "
                    f"stat={g.statistic:.4f} {detail} -> "
                    + ("REJECT" if g.reject else "fail to reject")
                )
        else:
            lines.append("family tests:        skipped (uncorrelatedness already rejected)")
        for w in self.warnings:
            lines.append(f"warning:             {w}")
        return "\n".join(lines) + "\n"


def run_verification(
    path: Path,
    estimator: str = LSB,
    alpha: float = 0.05,
    lag: int = 1,
    step5_families: tuple[str, ...] = ("normal",),
    force_step5: bool = False,
    bootstrap_count: int = 1000,
    sigma: float = 1.0,
    seed: int = 0,
    ks_on_resample: bool = False,
    inputs: dict[str, Any] | None = None,
) -> tuple[VerificationReport, np.ndarray, np.ndarray]:
    """Run the full pipeline on a path.

    Returns the report plus the recovered increments and their sample
    autocorrelations (for data files and figures).  Family tests run only
    when the uncorrelatedness test fails to reject, unless forced.
    """
    warnings_list: list[str] = []
    used_fallback = False
    if estimator == DMB:
        try:
            est = dmb_estimate(path)
        except PositivityError as exc:
            est = lsb_estimate(path)
            used_fallback = True
            warnings_list.append(str(exc))
    elif estimator == LSB:
        est = lsb_estimate(path)
    else:
        raise DomainError(f"unknown estimator {estimator!r}")

    incr = recover_increments(path, est.a_hat, sigma)
    white = w_statistic(incr, lag=lag, alpha=alpha)
    n = path.grid.n_periods
    if n <= SHORT_SERIES_PERIODS:
        warnings_list.append(
            f"only {n} periods: the uncorrelatedness test is unreliable below "
            f"{SHORT_SERIES_PERIODS + 1} periods"
        )

    step5_ran = (not white.reject) or force_step5
    gof: list[GofResult] = []
    if step5_ran and step5_families:
        stream = derive_stream(seed, 0)
        for family in step5_families:
            if family == "normal":
                gof.append(
                    procedure1_bm_test(incr.values, stream, alpha=alpha, ks_on_resample=ks_on_resample)
                )
            else:
                gof.append(
                    procedure2_gof_test(incr.values, family, stream, bootstrap_count=bootstrap_count)
                )

    mean, var = float(incr.values.mean()), float(incr.values.var())
    report = VerificationReport(
        a_hat=est.a_hat,
        estimator=est.method,
        used_fallback=used_fallback,
        n_periods=n,
        per_period=path.grid.per_period,
        increment_mean=mean,
        increment_variance=var,
        whiteness=white,
        step5_ran=step5_ran and bool(step5_families),
        gof=tuple(gof),
        warnings=tuple(warnings_list),
        inputs=dict(inputs or {}),
    )
    max_lag = min(40, incr.n - 1)
    return report, incr.values, acf(incr, max_lag)
