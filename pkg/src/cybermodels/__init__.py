"""Quantitative models of phishing detection, power-law vulnerability
discovery, and the patch-vs-exploit race, with Monte Carlo verification and a
scenario-driven CSV CLI."""

from .calibration import (
    CdfSample,
    DelayHistogram,
    estimate_beta,
    estimate_power_law_c,
    fit_exploit_total,
    fit_weibull_cdf,
    implied_unexploited,
    read_cdf_samples,
    read_delay_histogram,
    reference_exploit_histogram,
    reference_patch_dev_samples,
)
from .montecarlo import (
    SimConfig,
    SimEstimate,
    run_regression_suite,
    simulate_discovery,
    simulate_phishing,
    simulate_race,
)
from .numerics import FitResult, Grid, argmax_int, integrate_trapezoid, least_squares_fit
from .patchrace import (
    DeploymentParams,
    ExploitCurveParams,
    PatchRaceScenario,
    RaceSummary,
    WeibullParams,
    exploit_availability,
    exploitable_fraction,
    patch_deployed_cdf,
    patch_developed_all_vulns,
    patch_developed_cdf,
    patched_fraction,
    race_summary,
    race_sweep,
    weibull_pdf,
)
from .phishing import (
    CampaignPoint,
    PhishingParams,
    campaign_sweep,
    optimal_campaign,
    p_infection,
    p_no_alert,
    p_undetected,
)
from .scenario import Scenario, ScenarioError, default_scenario, load_scenario, resolve_scenario
from .series import CurveSeries
from .vulndisc import (
    AttemptRate,
    PowerLawTester,
    convert_attempts_time,
    discovery_rate,
    expected_discoveries,
    rate_crossover,
    total_discoveries_limit,
    weekly_series,
)

__version__ = "0.1.0"
