"""Bayesian ski rental: exact survival-conditioned posteriors, baselines, benchmarks."""

from .analytic import (
    ECRReport,
    ecr,
    ecr_geometric_closed_form,
    ecr_uniform_closed_form,
    geometric_residual_expectation,
    opt_expected_cost,
    policy_expected_cost,
)
from .policy import (
    DecisionOutcome,
    PolicyState,
    expected_rent,
    oracle_purchase_day,
    posterior_at,
    purchase_day,
    realized_cost,
    step,
)
from .priors import (
    DiscretePrior,
    Explicit,
    Mixture,
    PointMass,
    TruncatedGaussian,
    TruncatedGeometric,
    Uniform,
    build_prior,
    hazard,
    is_log_concave,
    parse_prior_spec,
    perturb,
    survival,
    tv_distance,
)

__version__ = "0.1.0"
