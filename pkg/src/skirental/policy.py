"""Bayesian rent-or-buy decision rule.

On day t the policy conditions the prior on survival (T >= t), computes the
expected remaining rental cost

    E_rent(t) = sum_{k>=t} Pr[T=k | T>=t] (k - t + 1)

and buys on the first day with ``b <= E_rent(t)``; day M+1 means "never".

Three equivalent evaluators are provided:

``dense``
    recomputes the posterior each day, O(M^2); the literal reference.
``suffix``
    one backward pass for Z_t = sum_{k>=t} pi_k and S1_t = sum_{k>=t} k pi_k,
    then E_rent(t) = (S1_t - (t-1) Z_t) / Z_t, O(M).
``sparse``
    walks only the n support points.  Between support points Z and S1 are
    constant, so E_rent falls by exactly one per day and the first crossing
    inside a gap can only be the gap's first day; O(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal, NamedTuple

import numpy as np

from .errors import InvalidParams, OutOfRange, ZeroMass, ZeroSurvival
from .priors import DiscretePrior

Method = Literal["suffix", "dense", "sparse"]


class TraceEntry(NamedTuple):
    day: int
    expected_rent: float
    action: str  # "rent" | "buy"


@dataclass(frozen=True)
class DecisionOutcome:
    """Purchase day t* plus an optional per-day trace.

    ``purchase_day == horizon_bound + 1`` encodes "never buy".  Baselines
    that do not know M leave ``horizon_bound`` as None.
    """

    purchase_day: int
    horizon_bound: int | None = None
    trace: tuple[TraceEntry, ...] | None = None

    @property
    def never_buys(self) -> bool:
        return self.horizon_bound is not None and self.purchase_day > self.horizon_bound


def _check_buy_cost(b: float) -> float:
    b = float(b)
    if not (b > 1 and math.isfinite(b)):
        raise InvalidParams(f"buy cost must be a finite number > 1, got {b!r}")
    return b


def _check_day(prior: DiscretePrior, t: int) -> None:
    if not 1 <= t <= prior.horizon_bound + 1:
        raise OutOfRange(f"t={t} outside 1..{prior.horizon_bound + 1}")


def posterior_at(prior: DiscretePrior, t: int) -> DiscretePrior:
    """Pr[T = k | T >= t]: the prior with days before t zeroed and renormalized."""
    _check_day(prior, t)
    z = prior.suffix_mass[t - 1]
    if z <= 0:
        raise ZeroSurvival(f"no prior mass at or after day {t}")
    w = prior.mass.copy()
    w[: t - 1] = 0.0
    return DiscretePrior.from_weights(w / z)


def expected_rent(prior: DiscretePrior, t: int) -> float:
    """Expected remaining rental cost from day t, by direct summation over the posterior."""
    _check_day(prior, t)
    tail = prior.mass[t - 1:]
    z = tail.sum()
    if z <= 0:
        raise ZeroSurvival(f"no prior mass at or after day {t}")
    return float((tail / z) @ np.arange(1, tail.size + 1))


def expected_rent_curve(prior: DiscretePrior) -> np.ndarray:
    """E_rent(t) for t = 1..M from suffix sums; NaN where no mass survives."""
    m = prior.horizon_bound
    z = prior.suffix_mass[:m]
    s1 = prior.suffix_moment[:m]
    t_minus_1 = np.arange(m, dtype=float)
    out = np.full(m, np.nan)
    alive = z > 0
    out[alive] = (s1[alive] - t_minus_1[alive] * z[alive]) / z[alive]
    return out


def _as_prior(prior) -> DiscretePrior | None:
    if isinstance(prior, DiscretePrior):
        return prior
    try:
        return DiscretePrior.from_weights(prior)
    except ZeroMass:
        return None


def _decide_dense(prior: DiscretePrior, b: float, trace: list | None) -> int:
    m = prior.horizon_bound
    mass = prior.mass
    for t in range(1, m + 1):
        z = mass[t - 1:].sum()
        if z == 0:
            return m + 1
        e = (mass[t - 1:] / z) @ np.arange(1, m - t + 2)
        if b <= e:
            if trace is not None:
                trace.append(TraceEntry(t, float(e), "buy"))
            return t
        if trace is not None:
            trace.append(TraceEntry(t, float(e), "rent"))
    return m + 1


def _decide_suffix(prior: DiscretePrior, b: float, trace: list | None) -> int:
    m = prior.horizon_bound
    z = prior.suffix_mass
    s1 = prior.suffix_moment
    if trace is None:
        alive = z[:m] > 0
        e = np.full(m, -np.inf)
        e[alive] = (s1[:m][alive] - np.arange(m)[alive] * z[:m][alive]) / z[:m][alive]
        hits = np.flatnonzero(b <= e)
        return int(hits[0]) + 1 if hits.size else m + 1
    for t in range(1, m + 1):
        zt = z[t - 1]
        if zt == 0:
            return m + 1
        e = (s1[t - 1] - (t - 1) * zt) / zt
        trace.append(TraceEntry(t, float(e), "buy" if b <= e else "rent"))
        if b <= e:
            return t
    return m + 1


def _decide_sparse(prior: DiscretePrior, b: float, trace: list | None) -> int:
    sp = prior.to_sparse()
    m = sp.horizon_bound
    days = sp.support
    z = np.cumsum(sp.weights[::-1])[::-1]
    s1 = np.cumsum((days * sp.weights)[::-1])[::-1]
    start = 1  # first day of the gap ending at support point i
    for i in range(days.size):
        e = (s1[i] - (start - 1) * z[i]) / z[i]
        if trace is not None:
            trace.append(TraceEntry(start, float(e), "buy" if b <= e else "rent"))
        if b <= e:
            return start
        start = int(days[i]) + 1
    return m + 1


def purchase_day(prior, b: float, method: Method = "suffix", trace: bool = False) -> DecisionOutcome:
    """First day t with ``b <= E_rent(t)``, or M+1 if there is none.

    Parameters
    ----------
    prior
        A :class:`DiscretePrior`, or a raw nonnegative weight vector (index 0
        is day 1) that is normalized first; an all-zero vector yields M+1.
    b
        Buy cost in rent-day units, > 1.  A tie ``b == E_rent(t)`` buys.
    method
        ``"suffix"`` (default), ``"dense"`` or ``"sparse"``; all three return
        the same day.
    trace
        Record ``(t, E_rent(t), action)`` for every evaluated day.  In the
        sparse path only the first day of each gap is evaluated.
    """
    b = _check_buy_cost(b)
    p = _as_prior(prior)
    if p is None:
        return DecisionOutcome(len(np.ravel(prior)) + 1, len(np.ravel(prior)))
    log = [] if trace else None
    decide = {"suffix": _decide_suffix, "dense": _decide_dense, "sparse": _decide_sparse}.get(method)
    if decide is None:
        raise InvalidParams(f"unknown method {method!r}")
    t_star = decide(p, b, log)
    return DecisionOutcome(t_star, p.horizon_bound, tuple(log) if log is not None else None)


# ---------------------------------------------------------------------------
# streaming form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolicyState:
    """Per-day bookkeeping for the streaming decision loop.

    ``remaining_mass`` is Z_t and ``remaining_moment`` is S1_t.
    """

    day: int
    remaining_mass: float
    remaining_moment: float
    buy_cost: float
    prior: DiscretePrior

    @classmethod
    def start(cls, prior: DiscretePrior, b: float) -> "PolicyState":
        b = _check_buy_cost(b)
        return cls(1, float(prior.suffix_mass[0]), float(prior.suffix_moment[0]), b, prior)

    @property
    def expected_rent(self) -> float:
        if self.remaining_mass <= 0:
            raise ZeroSurvival(f"no prior mass at or after day {self.day}")
        t, z = self.day, self.remaining_mass
        return (self.remaining_moment - (t - 1) * z) / z


def step(state: PolicyState) -> tuple[str, PolicyState]:
    """Advance the decision loop by one day.

    Returns ``("buy", state)`` when buying today (the state is terminal),
    ``("rent", next_state)`` otherwise, and ``("season_over", state)`` once
    t > M or no mass survives.  The next day's Z and S1 are read from the
    prior's backward-accumulated suffix sums instead of being obtained by
    subtracting pi_t, which would cancel catastrophically in thin tails;
    the values agree with Z_t - pi_t and S1_t - t pi_t up to rounding.
    """
    m = state.prior.horizon_bound
    if state.day > m or state.remaining_mass <= 0:
        return "season_over", state
    if state.buy_cost <= state.expected_rent:
        return "buy", state
    t = state.day + 1
    return "rent", replace(state, day=t,
                           remaining_mass=float(state.prior.suffix_mass[t - 1]),
                           remaining_moment=float(state.prior.suffix_moment[t - 1]))


def replay(prior: DiscretePrior, b: float) -> int:
    """Run :func:`step` from day 1 until a terminal action; return t*."""
    state = PolicyState.start(prior, b)
    while True:
        action, state = step(state)
        if action == "buy":
            return state.day
        if action == "season_over":
            return prior.horizon_bound + 1


# ---------------------------------------------------------------------------
# costs and the brute-force optimum
# ---------------------------------------------------------------------------


def realized_cost(t_star: int, T: int, b: float, horizon_bound: int | None = None) -> float:
    """Cost of buying at the start of day ``t_star`` when the season lasts T days."""
    if t_star < 1 or T < 1:
        raise OutOfRange(f"t*={t_star} and T={T} must be >= 1")
    if horizon_bound is not None and (t_star > horizon_bound + 1 or T > horizon_bound):
        raise OutOfRange(f"t*={t_star} or T={T} outside horizon M={horizon_bound}")
    return (t_star - 1) + b if t_star <= T else float(T)


# every finite double is an integer multiple of 2**-1074
_DYADIC_SCALE = 1 << 1074


def _cost_numerators(prior: DiscretePrior, b: float) -> tuple[list[int], int]:
    """Exact expected cost of buying on each day t in 1..M+1, as integers over a common denominator.

    Brute force, O(M^2): for each t both sums are formed from scratch.  Weights
    and b are converted exactly, so near-ties in far tails are resolved by the
    true costs rather than by rounding.
    """
    b = _check_buy_cost(b)
    b_num, b_den = float(b).as_integer_ratio()
    pts = [(k, int(Fraction(w) * _DYADIC_SCALE)) for k, w in prior.points()]
    out = []
    for t in range(1, prior.horizon_bound + 2):
        buy = (t - 1) * b_den + b_num
        out.append(sum(w * k * b_den if k < t else w * buy for k, w in pts))
    return out, _DYADIC_SCALE * b_den


def expected_cost_by_day(prior: DiscretePrior, b: float) -> np.ndarray:
    """Expected cost of committing to buy on day t, for every t in 1..M+1.

    Exact brute force (see ``_cost_numerators``), rounded once to float.
    Serves as an oracle independent of the E_rent machinery.
    """
    nums, den = _cost_numerators(prior, b)
    return np.array([float(Fraction(n, den)) for n in nums])


def oracle_purchase_day(prior: DiscretePrior, b: float) -> int:
    """argmin over t of the exact expected cost, reported on the policy's scale.

    Smallest minimizer wins; a minimizer past the last support day is
    indistinguishable from never buying and is reported as M+1.
    """
    nums, _ = _cost_numerators(prior, b)
    t = nums.index(min(nums)) + 1
    if t > int(prior.nonzero_support[-1]):
        return prior.horizon_bound + 1
    return t
