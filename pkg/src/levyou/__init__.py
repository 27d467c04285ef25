"""Simulation, estimation and verification of Levy-driven OU (CAR(1)) models.

The workflow mirrors how the model is checked in practice: simulate or
ingest a discretely sampled path, estimate the mean-reversion rate,
recover the driving-process increments, test their uncorrelatedness, and
test the increments against specific driving families (Brownian motion,
Gamma, inverse Gaussian).  A Monte Carlo harness measures empirical level
and power of the tests under replicated simulation.
"""

from .car1 import (
    Car1Params,
    Path,
    SamplingGrid,
    StationaryMoments,
    simulate_path,
    stationary_moments,
)
from .data import (
    PathMapping,
    PriceSeries,
    daily_returns,
    load_prices,
    pair_spread,
    path_from_series,
    realized_volatility,
    to_path,
)
from .disttest import (
    FAMILIES,
    FamilyFit,
    GofResult,
    dn_statistic,
    family_cdf,
    fit_moments,
    procedure1_bm_test,
    procedure2_gof_test,
)
from .errors import (
    DegenerateSampleError,
    DomainError,
    FitError,
    LevyOUError,
    PositivityError,
)
from .estimators import DMB, LSB, RateEstimate, dmb_estimate, lsb_estimate
from .levy import (
    DrivingKind,
    LevyParams,
    increment_params,
    sample_increment_sequence,
)
from .montecarlo import (
    ExperimentConfig,
    RateResult,
    parse_table_file,
    recommended_estimator,
    run_level,
    run_power,
    run_table,
)
from .recovery import IncrementSeries, recover_increments
from .rng import (
    derive_stream,
    sample_gamma,
    sample_inverse_gaussian,
    sample_std_normal,
    sample_uniform,
)
from .special import (
    ks_pvalue,
    log_std_normal_cdf,
    regularized_lower_gamma,
    std_normal_cdf,
    std_normal_quantile,
)
from .verify import VerificationReport, run_verification
from .whiteness import (
    WhitenessResult,
    acf,
    sample_autocov,
    sample_moments,
    w_statistic,
)

__version__ = "0.1.0"
