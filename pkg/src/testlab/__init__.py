"""testlab: a workbench for statistical hypothesis testing.

Five testing styles over one set of primitives: directed tail p-values,
sequential likelihood-ratio evidence, Bayesian posterior odds, fixed-error
decision rules for the two-Gaussian scenario, and divergence-based rules
(maximum a posteriori, ratio-threshold-as-margin, the universal
one-hypothesis test) — plus a seeded Monte Carlo harness that checks the
error bounds empirically.
"""

__version__ = "0.1.0"

from .dist import (
    EmpiricalDistribution,
    FiniteDistribution,
    Gaussian,
    GaussianPair,
    Seed,
    empirical,
    gaussian_cdf,
    gaussian_quantile,
    sample,
)
from .errors import TestlabError
from .evidential import (
    EvidenceGrade,
    GradeStrength,
    LogEvidence,
    Priors,
    ROYALL_THRESHOLDS,
    Verdict,
    evidence_from_sample,
    grade,
    posterior_odds,
    posterior_prob_k,
    robbins_violation_probability,
    threshold_verdict,
    update,
    update_gaussian,
)
from .fisher import (
    CONVENTIONAL_LEVELS,
    PValueReport,
    TailDirection,
    binomial_tail,
    identical_point_prob_pair,
    p_value,
    significance_verdict,
)
from .harness import (
    OptionalStoppingReport,
    Scenario,
    SimulationReport,
    family_wise_error,
    load_scenario,
    optional_stopping_alpha,
    run as run_scenario,
)
from .info_geometry import (
    Divergence,
    HoeffdingResult,
    KlMarginVerdict,
    UniversalDecision,
    UniversalTestConfig,
    evidence_rate,
    hoeffding_test,
    kl,
    loglr_kl_identity_check,
    lr_threshold_as_kl_margin,
    map_decide,
    types_bound_radius,
)
from .montecarlo import MCEstimate
from .neyman_pearson import (
    DecisionRule,
    ErrorRates,
    PowerSpec,
    adjust_alpha,
    midpoint_rule,
    np_test,
    solve_power,
)

__all__ = [
    "CONVENTIONAL_LEVELS",
    "DecisionRule",
    "Divergence",
    "EmpiricalDistribution",
    "ErrorRates",
    "EvidenceGrade",
    "FiniteDistribution",
    "Gaussian",
    "GaussianPair",
    "GradeStrength",
    "HoeffdingResult",
    "KlMarginVerdict",
    "LogEvidence",
    "MCEstimate",
    "OptionalStoppingReport",
    "PValueReport",
    "PowerSpec",
    "Priors",
    "ROYALL_THRESHOLDS",
    "Scenario",
    "Seed",
    "SimulationReport",
    "TailDirection",
    "TestlabError",
    "UniversalDecision",
    "UniversalTestConfig",
    "Verdict",
    "adjust_alpha",
    "binomial_tail",
    "empirical",
    "evidence_from_sample",
    "evidence_rate",
    "family_wise_error",
    "gaussian_cdf",
    "gaussian_quantile",
    "grade",
    "hoeffding_test",
    "identical_point_prob_pair",
    "kl",
    "load_scenario",
    "loglr_kl_identity_check",
    "lr_threshold_as_kl_margin",
    "map_decide",
    "midpoint_rule",
    "np_test",
    "optional_stopping_alpha",
    "p_value",
    "posterior_odds",
    "posterior_prob_k",
    "robbins_violation_probability",
    "run_scenario",
    "sample",
    "significance_verdict",
    "solve_power",
    "threshold_verdict",
    "types_bound_radius",
    "update",
    "update_gaussian",
]
