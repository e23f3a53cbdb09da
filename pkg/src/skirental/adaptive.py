"""Repeated seasons: learn the prior online, track regret, contextual priors."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, InvalidParams, OutOfRange
from .policy import DecisionOutcome, _check_buy_cost, purchase_day, realized_cost
from .priors import DiscretePrior, FamilySpec, Uniform, build_prior

Schedule = Callable[[int, int], float]


def learning_rate(r: int, horizon_bound: int) -> float:
    """alpha_r = min(1, sqrt(ln M / r)), natural log."""
    if r < 1 or horizon_bound < 2:
        raise InvalidParams(f"need r >= 1 and M >= 2, got r={r}, M={horizon_bound}")
    return min(1.0, math.sqrt(math.log(horizon_bound) / r))


def constant_rate(alpha: float) -> Schedule:
    if not 0 <= alpha <= 1:
        raise InvalidParams(f"alpha must lie in [0, 1], got {alpha!r}")
    return lambda r, m: alpha


@dataclass(frozen=True)
class RoundRecord:
    round: int
    alpha: float
    purchase_day: int
    horizon: int
    cost: float
    opt: float
    regret: float
    cum_regret: float


@dataclass(frozen=True)
class AdaptiveState:
    """Round counter, current prior, running regret; ``last`` is the previous round's record."""

    round: int
    prior: DiscretePrior
    cumulative_regret: float = 0.0
    schedule: Schedule = field(default=learning_rate, compare=False)
    last: RoundRecord | None = None

    @classmethod
    def start(cls, horizon_bound: int, schedule: Schedule = learning_rate) -> "AdaptiveState":
        return cls(1, build_prior(Uniform(), horizon_bound), 0.0, schedule)


def ema_update(prior: DiscretePrior, observed: int, alpha: float) -> DiscretePrior:
    """(1 - alpha) * prior + alpha * point mass at the observed horizon."""
    if alpha == 0:
        return prior
    w = (1.0 - alpha) * prior.mass
    w[observed - 1] += alpha
    return DiscretePrior.from_weights(w)


def adaptive_round(state: AdaptiveState, horizon: int, b: float) -> tuple[DecisionOutcome, AdaptiveState]:
    """Decide with the current prior, pay, observe T_r, update the prior.

    The round's cost, OPT and regret are available as ``next_state.last``.
    """
    b = _check_buy_cost(b)
    m = state.prior.horizon_bound
    if not 1 <= horizon <= m:
        raise OutOfRange(f"T_r={horizon} outside 1..{m}")
    outcome = purchase_day(state.prior, b)
    cost = realized_cost(outcome.purchase_day, horizon, b)
    opt = min(horizon, b)
    regret = cost - opt
    alpha = state.schedule(state.round, m)
    cum = state.cumulative_regret + regret
    record = RoundRecord(state.round, alpha, outcome.purchase_day, horizon, cost, opt, regret, cum)
    nxt = replace(state, round=state.round + 1, prior=ema_update(state.prior, horizon, alpha),
                  cumulative_regret=cum, last=record)
    return outcome, nxt


@dataclass
class RegretTrajectory:
    records: list[RoundRecord]
    horizon_bound: int

    @property
    def regret(self) -> np.ndarray:
        return np.array([r.regret for r in self.records])

    @property
    def cum_regret(self) -> np.ndarray:
        return np.array([r.cum_regret for r in self.records])

    def normalized(self) -> np.ndarray:
        """Regret_r / sqrt(r ln M) for every round r."""
        r = np.arange(1, len(self.records) + 1)
        return self.cum_regret / np.sqrt(r * math.log(self.horizon_bound))

    @property
    def fitted_constant(self) -> float:
        """Smallest C with Regret_r <= C sqrt(r ln M) along the whole trajectory."""
        return float(self.normalized().max())

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["round", "alpha", "cost", "opt", "regret", "cum_regret"])
            for r in self.records:
                writer.writerow([r.round, r.alpha, r.cost, r.opt, r.regret, r.cum_regret])


def sample_horizons(prior: DiscretePrior, n: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(prior.mass)
    last = int(prior.nonzero_support[-1])
    return np.minimum(np.searchsorted(cdf, rng.random(n), side="right") + 1, last)


def run_adaptive(rounds: int, true_distribution: FamilySpec | DiscretePrior, b: float, seed: int,
                 horizon_bound: int = 500, schedule: Schedule = learning_rate) -> RegretTrajectory:
    """Play ``rounds`` seasons with T_r drawn i.i.d. from the true distribution."""
    if rounds < 1:
        raise InvalidParams(f"need at least one round, got {rounds}")
    truth = true_distribution if isinstance(true_distribution, DiscretePrior) \
        else build_prior(true_distribution, horizon_bound)
    horizons = sample_horizons(truth, rounds, np.random.default_rng(seed))
    state = AdaptiveState.start(truth.horizon_bound, schedule)
    records = []
    for horizon in horizons:
        _, state = adaptive_round(state, int(horizon), b)
        records.append(state.last)
    return RegretTrajectory(records, truth.horizon_bound)


# ---------------------------------------------------------------------------
# contextual priors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContextModel:
    """Softmax prior: pi_k(x) proportional to exp(theta_k . phi(x)).

    ``theta`` has shape (M, d); row k-1 belongs to day k.  ``feature_map``
    defaults to treating the context itself as the feature vector.
    """

    theta: np.ndarray
    feature_map: Callable | None = None

    def features(self, x) -> np.ndarray:
        phi = self.feature_map(x) if self.feature_map is not None else x
        return np.atleast_1d(np.asarray(phi, dtype=float))


def contextual_prior(model: ContextModel, x) -> DiscretePrior:
    theta = np.asarray(model.theta, dtype=float)
    if theta.ndim == 1:
        theta = theta[:, None]
    phi = model.features(x)
    if theta.shape[1] != phi.size:
        raise DimensionMismatch(f"theta has d={theta.shape[1]} but phi(x) has {phi.size} entries")
    logits = theta @ phi
    return DiscretePrior.from_weights(np.exp(logits - logits.max()))
