"""Expected costs and expected competitive ratios (ECR).

The ECR here is a ratio of expectations, E[ALG] / E[OPT] under the prior.
The per-trial "mean CR" reported by the Monte Carlo harness is a different
quantity (the expectation of ALG/OPT); see :mod:`skirental.harness`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .policy import _check_buy_cost, purchase_day
from .priors import DiscretePrior, FamilySpec, PointMass, TruncatedGaussian, TruncatedGeometric, Uniform

# parameter grids swept by the closed-form and monotonicity checks
BUY_COST_GRID = (2, 5, 10, 50, 100, 200)
GEOMETRIC_P_GRID = (0.01, 0.05, 0.1, 0.3, 0.5, 0.9)
SUPPORT_GRID = (10, 50, 100, 500)
GAUSSIAN_MU_GRID = (1.0, 10.0, 50.0, 100.0, 250.0, 480.0)
GAUSSIAN_SIGMA_GRID = (0.5, 3.0, 10.0, 30.0, 100.0)


@dataclass(frozen=True)
class ECRReport:
    ecr: float
    alg_expected_cost: float
    opt_expected_cost: float
    t_star: int


def opt_expected_cost(prior: DiscretePrior, b: float) -> float:
    """E[min(T, b)] under the prior."""
    b = _check_buy_cost(b)
    return float(prior.weights @ np.minimum(prior.support, b))


def policy_expected_cost(prior: DiscretePrior, t_star: int, b: float) -> float:
    """sum_{k<t*} pi_k k + sum_{k>=t*} pi_k (t* - 1 + b).

    ``t_star = M+1`` (never buy) leaves the second sum empty.
    """
    b = _check_buy_cost(b)
    k, w = prior.support, prior.weights
    early = k < t_star
    return float(w[early] @ k[early] + w[~early].sum() * (t_star - 1 + b))


def ecr(prior: DiscretePrior, b: float) -> ECRReport:
    t_star = purchase_day(prior, b).purchase_day
    alg = policy_expected_cost(prior, t_star, b)
    opt = opt_expected_cost(prior, b)
    return ECRReport(alg / opt, alg, opt, t_star)


def ecr_uniform_closed_form(n: int, b: float) -> float:
    """ECR of the Bayesian policy under the uniform prior on {1..N}.

    1 for N <= b; N(N+1) / (b(2N - b + 1)) for b < N < 2b - 1;
    2N / (2N - b + 1) for N >= 2b - 1.
    """
    if int(n) != n or n < 1:
        raise InvalidParams(f"N must be a positive integer, got {n!r}")
    if not b > 1:
        raise InvalidParams(f"buy cost must be > 1, got {b!r}")
    if n <= b:
        return 1.0
    if n < 2 * b - 1:
        return n * (n + 1) / (b * (2 * n - b + 1))
    return 2 * n / (2 * n - b + 1)


def _check_geometric(p: float, n: int) -> None:
    if not 0 < p < 1:
        raise InvalidParams(f"p must lie in (0, 1), got {p!r}")
    if int(n) != n or n < 1:
        raise InvalidParams(f"N must be a positive integer, got {n!r}")


def geometric_residual_expectation(p: float, n: int, k: int) -> float:
    """E_rent(k+1) for the geometric prior truncated to {1..N}.

    Equals 1/p - m q^m / (1 - q^m) with q = 1-p and m = N-k remaining days.
    Powers go through log1p/expm1 so that small p keeps full precision.
    """
    _check_geometric(p, n)
    if int(k) != k or not 0 <= k < n:
        raise InvalidParams(f"k must be an integer in [0, N), got {k!r}")
    m = n - k
    log_q_m = m * math.log1p(-p)
    return 1.0 / p - m * math.exp(log_q_m) / -math.expm1(log_q_m)


def geometric_opt_expected_cost(p: float, n: int, b: float) -> float:
    """E[min(T, b)] for the truncated geometric, from its survival function.

    E[min(T, b)] = sum_{j=1}^{floor b} S(j) + (b - floor b) S(floor b + 1), with
    S(j) = (q^{j-1} - q^N) / (1 - q^N) for j <= N and 0 beyond.
    """
    _check_geometric(p, n)
    b = _check_buy_cost(b)
    lq = math.log1p(-p)
    q_n = math.exp(n * lq)
    denom = -math.expm1(n * lq)
    whole = min(int(math.floor(b)), n)
    # sum_{j=1}^{whole} q^{j-1} = (1 - q^whole) / p
    total = (-math.expm1(whole * lq) / p - whole * q_n) / denom
    frac = b - math.floor(b)
    if frac and whole < n:
        total += frac * (math.exp(whole * lq) - q_n) / denom
    return total


def ecr_geometric_closed_form(p: float, n: int, b: float) -> float:
    """min(E_1, b) / E[min(T, b)] for the truncated geometric prior.

    Valid whenever the policy decides on day 1, which holds because the
    truncated geometric is log-concave and E_rent is therefore nonincreasing.
    """
    _check_geometric(p, n)
    if n <= 2:
        raise InvalidParams(f"closed form stated for N > 2, got N={n}")
    b = _check_buy_cost(b)
    e1 = geometric_residual_expectation(p, n, 0)
    return min(e1, b) / geometric_opt_expected_cost(p, n, b)


def smallest_monotone_horizon(p: float, n_max: int = 500) -> int | None:
    """Smallest N0 such that k -> E_rent(k+1) is nonincreasing for every N in [N0, n_max].

    Monotonicity is checked with the closed form, allowing 1e-12 relative slack.
    """
    ok_from = None
    for n in range(n_max, 0, -1):
        vals = [geometric_residual_expectation(p, n, k) for k in range(n)]
        mono = all(b <= a + 1e-12 * abs(a) for a, b in zip(vals, vals[1:]))
        if not mono:
            break
        ok_from = n
    return ok_from


def log_concave_grid() -> list[FamilySpec]:
    """Log-concave family specs covering the grids above (all fit in M = 500)."""
    specs: list[FamilySpec] = [Uniform(n) for n in SUPPORT_GRID]
    specs += [TruncatedGeometric(p, n) for p in GEOMETRIC_P_GRID for n in SUPPORT_GRID]
    specs += [TruncatedGaussian(mu, sigma) for mu in GAUSSIAN_MU_GRID for sigma in GAUSSIAN_SIGMA_GRID]
    specs += [PointMass(k) for k in (1, 50, 500)]
    return specs
