"""Comparison policies: classical thresholds and prediction-driven rules.

All of them return a :class:`~skirental.policy.DecisionOutcome`, so costs
are accounted with :func:`~skirental.policy.realized_cost` exactly as for the
Bayesian policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidLambda, InvalidParams
from .policy import DecisionOutcome, _check_buy_cost, realized_cost

# absorbs representation error such as 0.7 * 100 = 70.00000000000001
_CEIL_SLACK = 1e-9


def _ceil_day(x: float) -> int:
    return max(1, math.ceil(x - _CEIL_SLACK))


def _clamp(t: int, horizon_bound: int | None) -> DecisionOutcome:
    if horizon_bound is not None and t > horizon_bound:
        t = horizon_bound + 1
    return DecisionOutcome(t, horizon_bound)


def deterministic_threshold(b: float, horizon_bound: int | None = None) -> DecisionOutcome:
    """Rent until day ceil(b), buy at its start."""
    b = _check_buy_cost(b)
    return _clamp(_ceil_day(b), horizon_bound)


@dataclass(frozen=True)
class RandomizedStrategy:
    """Distribution over buy days 1..ceil(b): q_j proportional to (1 - 1/b)^(b - j)."""

    buy_cost: float
    threshold_pmf: np.ndarray
    seed: int | None = None

    @classmethod
    def for_cost(cls, b: float, seed: int | None = None) -> "RandomizedStrategy":
        b = _check_buy_cost(b)
        days = np.arange(1, _ceil_day(b) + 1)
        log_q = (b - days) * math.log1p(-1.0 / b)
        q = np.exp(log_q - log_q.max())
        q /= q.sum()
        q.setflags(write=False)
        return cls(b, q, seed)

    @property
    def days(self) -> np.ndarray:
        return np.arange(1, self.threshold_pmf.size + 1)

    def sample(self, rng: np.random.Generator | None = None) -> int:
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        return self.day_from_uniform(rng.random())

    def day_from_uniform(self, u):
        """Inverse-CDF map of uniform draw(s) in [0, 1) to buy day(s)."""
        cdf = np.cumsum(self.threshold_pmf)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)
        return idx + 1 if np.ndim(u) else int(idx) + 1

    def expected_cost(self, T: int) -> float:
        """Exact E[cost | T], summing over the threshold pmf."""
        days = self.days
        costs = np.where(days <= T, days - 1 + self.buy_cost, float(T))
        return float(self.threshold_pmf @ costs)

    def expected_ratio(self, T: int) -> float:
        return self.expected_cost(T) / min(T, self.buy_cost)


def randomized_threshold(b: float, seed: int | None = None, horizon_bound: int | None = None,
                         rng: np.random.Generator | None = None) -> DecisionOutcome:
    """Sample a buy day from the classical e/(e-1)-competitive threshold distribution."""
    strategy = RandomizedStrategy.for_cost(b, seed)
    return _clamp(strategy.sample(rng), horizon_bound)


def point_prediction_policy(t_hat: float, b: float, horizon_bound: int) -> DecisionOutcome:
    """Trust the forecast: buy on day 1 if it says T >= b, otherwise never."""
    b = _check_buy_cost(b)
    if not math.isfinite(t_hat):
        raise InvalidParams(f"prediction must be finite, got {t_hat!r}")
    return DecisionOutcome(1 if t_hat >= b else horizon_bound + 1, horizon_bound)


def augmented_threshold_policy(t_hat: float, b: float, lam: float = 0.5,
                               horizon_bound: int | None = None) -> DecisionOutcome:
    """Prediction-dependent threshold with trust parameter ``lam`` in (0, 1].

    Buys at ceil(lam * b) when the forecast says T >= b and at ceil(b / lam)
    otherwise; ``lam = 1`` is the deterministic break-even rule.  This is a
    stand-in for the learning-augmented baseline family, not a
    reconstruction of any particular published algorithm.
    """
    b = _check_buy_cost(b)
    if not 0 < lam <= 1:
        raise InvalidLambda(f"lambda must lie in (0, 1], got {lam!r}")
    t = _ceil_day(lam * b) if t_hat >= b else _ceil_day(b / lam)
    return _clamp(t, horizon_bound)


def worst_case_ratio(outcome: DecisionOutcome, b: float, horizons) -> float:
    """max over T of realized cost / min(T, b) for a fixed purchase day."""
    return max(realized_cost(outcome.purchase_day, int(T), b) / min(int(T), b) for T in horizons)
