"""Fuse noisy horizon forecasts into a posterior over T.

Each forecast (T_hat_i, sigma_i) contributes a Gaussian likelihood
exp(-(k - T_hat_i)^2 / (2 sigma_i^2)) evaluated at integer k.  Updates are
carried in log space and renormalized with a log-sum-exp at every step, so
tight, mutually distant forecasts do not underflow to an all-zero posterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import InvalidParams, ZeroPosterior
from .priors import DiscretePrior, TruncatedGaussian, build_prior


@dataclass(frozen=True)
class Prediction:
    value: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InvalidParams(f"prediction must be finite, got {self.value!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InvalidParams(f"prediction sigma must be positive, got {self.sigma!r}")

    def log_likelihood(self, days: np.ndarray) -> np.ndarray:
        # scale before squaring: sigma**2 can underflow where (x/sigma)**2 only overflows
        with np.errstate(over="ignore"):
            return -0.5 * ((days - self.value) / self.sigma) ** 2


def _log_prior(prior: DiscretePrior) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(prior.mass)


def _finish(logp: np.ndarray) -> DiscretePrior:
    if not np.isfinite(logp).any():
        raise ZeroPosterior("every horizon has zero posterior weight")
    return DiscretePrior.from_weights(np.exp(logp - logp.max()))


def fuse(initial: DiscretePrior, predictions: Sequence[Prediction]) -> DiscretePrior:
    """Sequential Bayes update of ``initial`` by each forecast in turn."""
    if not predictions:
        return initial
    days = np.arange(1, initial.horizon_bound + 1, dtype=float)
    logp = _log_prior(initial)
    for pred in predictions:
        logp = logp + pred.log_likelihood(days)
        if not np.isfinite(logp).any():
            raise ZeroPosterior("every horizon has zero posterior weight")
        logp = logp - logsumexp(logp)
    return _finish(logp)


def fuse_batch(initial: DiscretePrior, predictions: Sequence[Prediction]) -> DiscretePrior:
    """One joint update with the product of all likelihoods."""
    if not predictions:
        return initial
    days = np.arange(1, initial.horizon_bound + 1, dtype=float)
    logp = _log_prior(initial) + sum(p.log_likelihood(days) for p in predictions)
    return _finish(logp)


def prediction_to_prior(t_hat: float, beta: float, horizon_bound: int) -> DiscretePrior:
    """Truncated Gaussian prior centred on the forecast with sigma = beta * t_hat."""
    if not beta > 0:
        raise InvalidParams(f"relative noise beta must be positive, got {beta!r}")
    if not (t_hat > 0 and math.isfinite(t_hat)):
        raise InvalidParams(f"forecast must be positive to set a scale, got {t_hat!r}")
    return build_prior(TruncatedGaussian(t_hat, beta * t_hat), horizon_bound)


def load_predictions(path) -> list[Prediction]:
    """Read ``T_hat,sigma`` lines; ``#`` starts a comment."""
    out = []
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != 2:
                raise InvalidParams(f"{path}:{lineno}: expected 'T_hat,sigma'")
            try:
                out.append(Prediction(float(fields[0]), float(fields[1])))
            except ValueError as exc:
                raise InvalidParams(f"{path}:{lineno}: {exc}") from exc
    return out
