"""Seeded Monte Carlo engine and the four experiment drivers.

Trial ``i`` draws everything it needs from ``numpy.random.default_rng(base_seed + i)``
in a fixed order (horizon, randomized-threshold uniform, forecast noise), so
every policy in a batch sees the same season and the same forecast, and a
batch is reproducible bit for bit.

Two aggregate ratios are reported and must not be confused:

* ``mean_cr``: the average of per-trial ALG/OPT ratios;
* ``ecr_empirical``: mean ALG cost over mean OPT cost, the Monte Carlo
  estimate of the ratio-of-expectations ECR computed in :mod:`skirental.analytic`.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .analytic import opt_expected_cost, policy_expected_cost
from .baselines import RandomizedStrategy, _ceil_day
from .errors import EmptyBatch, InvalidParams
from .fusion import prediction_to_prior
from .policy import _check_buy_cost, expected_rent_curve, oracle_purchase_day, purchase_day
from .priors import (
    DiscretePrior,
    FamilySpec,
    MeanShift,
    PointMass,
    ShapeSwap,
    TruncatedGaussian,
    Uniform,
    VarianceScale,
    build_prior,
    exponential_as_geometric,
    is_log_concave,
    parse_prior_spec,
    perturb,
    spec_to_dict,
    tv_distance,
)

POLICY_KINDS = ("bayesian", "bayesian_prediction", "deterministic", "randomized",
                "point_prediction", "augmented")


@dataclass(frozen=True)
class PolicySpec:
    """A policy id plus its parameters.

    ``assumed`` is the Bayesian policy's prior (None: the true distribution).
    Prediction-driven kinds see T_hat = bias * T + noise * T * z, z ~ N(0, 1).
    """

    kind: str
    assumed: FamilySpec | DiscretePrior | None = None
    lam: float = 0.5
    bias: float = 1.0
    noise: float = 0.3
    label: str | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise InvalidParams(f"unknown policy {self.kind!r}; expected one of {POLICY_KINDS}")

    @property
    def name(self) -> str:
        return self.label or self.kind

    def snapshot(self) -> dict:
        d = {"kind": self.kind, "label": self.name}
        if self.kind == "bayesian" and self.assumed is not None:
            fam = self.assumed.family if isinstance(self.assumed, DiscretePrior) else self.assumed
            d["assumed"] = spec_to_dict(fam) if fam is not None else "explicit"
        if self.kind == "augmented":
            d["lambda"] = self.lam
        if self.kind in ("bayesian_prediction", "point_prediction", "augmented"):
            d.update(bias=self.bias, noise=self.noise)
        return d


STANDARD_POLICIES = (
    PolicySpec("bayesian"),
    PolicySpec("point_prediction"),
    PolicySpec("augmented", label="augmented_lambda_threshold"),
    PolicySpec("randomized"),
    PolicySpec("deterministic"),
)


@dataclass(frozen=True)
class TrialDraws:
    seeds: np.ndarray
    horizon: np.ndarray
    uniform: np.ndarray
    normal: np.ndarray


def draw_trials(truth: DiscretePrior, n_trials: int, base_seed: int) -> TrialDraws:
    if n_trials < 1:
        raise InvalidParams(f"need at least one trial, got {n_trials}")
    cdf = np.cumsum(truth.mass)
    last = int(truth.nonzero_support[-1])
    seeds = base_seed + np.arange(n_trials, dtype=np.int64)
    a = np.empty(n_trials)
    u = np.empty(n_trials)
    z = np.empty(n_trials)
    for i, seed in enumerate(seeds):
        rng = np.random.default_rng(int(seed))
        a[i], u[i] = rng.random(2)
        z[i] = rng.standard_normal()
    horizon = np.minimum(np.searchsorted(cdf, a, side="right") + 1, last)
    return TrialDraws(seeds, horizon, u, z)


def _forecasts(spec: PolicySpec, draws: TrialDraws) -> np.ndarray:
    T = draws.horizon.astype(float)
    return spec.bias * T + spec.noise * T * draws.normal


def policy_purchase_days(spec: PolicySpec, draws: TrialDraws, truth: DiscretePrior, b: float) -> np.ndarray:
    """Purchase day of ``spec`` in every trial (M+1 = never)."""
    m = truth.horizon_bound
    n = draws.horizon.size
    if spec.kind == "bayesian":
        if spec.assumed is None:
            assumed = truth
        elif isinstance(spec.assumed, DiscretePrior):
            assumed = spec.assumed
        else:
            assumed = build_prior(spec.assumed, m)
        return np.full(n, purchase_day(assumed, b).purchase_day)
    if spec.kind == "deterministic":
        return np.full(n, min(_ceil_day(b), m + 1))
    if spec.kind == "randomized":
        days = RandomizedStrategy.for_cost(b).day_from_uniform(draws.uniform)
        return np.minimum(days, m + 1)
    t_hat = _forecasts(spec, draws)
    if spec.kind == "point_prediction":
        return np.where(t_hat >= b, 1, m + 1)
    if spec.kind == "augmented":
        if not 0 < spec.lam <= 1:
            raise InvalidParams(f"lambda must lie in (0, 1], got {spec.lam!r}")
        trusting = min(_ceil_day(spec.lam * b), m + 1)
        doubting = min(_ceil_day(b / spec.lam), m + 1)
        return np.where(t_hat >= b, trusting, doubting)
    # bayesian_prediction: a nonpositive forecast is read as a one-day season
    out = np.empty(n, dtype=np.int64)
    for i, value in enumerate(np.maximum(t_hat, 1.0)):
        out[i] = purchase_day(prediction_to_prior(value, spec.noise, m), b).purchase_day
    return out


@dataclass
class TrialBatch:
    """Per-trial results for one or more policies sharing the same draws."""

    policies: list[str]
    seeds: np.ndarray
    horizon: np.ndarray
    buy_cost: float
    t_star: dict[str, np.ndarray]
    cost: dict[str, np.ndarray]
    config: dict = field(default_factory=dict)

    @property
    def opt(self) -> np.ndarray:
        return np.minimum(self.horizon, self.buy_cost).astype(float)

    def ratio(self, policy: str) -> np.ndarray:
        return self.cost[policy] / self.opt

    def write_trials_csv(self, path) -> None:
        opt = self.opt
        ratios = {p: self.ratio(p) for p in self.policies}
        rows = []
        for i in range(self.horizon.size):
            for p in self.policies:
                rows.append([i, int(self.seeds[i]), int(self.horizon[i]), p, int(self.t_star[p][i]),
                             float(self.cost[p][i]), float(opt[i]), float(ratios[p][i])])
        write_rows(path, ["trial", "seed", "T", "policy", "t_star", "cost", "opt", "ratio"], rows)


def _costs(t_star: np.ndarray, horizon: np.ndarray, b: float) -> np.ndarray:
    return np.where(t_star <= horizon, t_star - 1 + b, horizon).astype(float)


def _as_policy_list(policy) -> list[PolicySpec]:
    if isinstance(policy, (PolicySpec, str)):
        policy = [policy]
    return [PolicySpec(p) if isinstance(p, str) else p for p in policy]


def run_trials(true_dist: FamilySpec | DiscretePrior, policy, b: float, n_trials: int, base_seed: int,
               horizon_bound: int = 500) -> TrialBatch:
    """Sample ``n_trials`` seasons from ``true_dist`` and evaluate each policy on them."""
    b = _check_buy_cost(b)
    truth = true_dist if isinstance(true_dist, DiscretePrior) else build_prior(true_dist, horizon_bound)
    specs = _as_policy_list(policy)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise InvalidParams(f"policy labels must be unique, got {names}")
    draws = draw_trials(truth, n_trials, base_seed)
    t_star, cost = {}, {}
    for spec in specs:
        t_star[spec.name] = policy_purchase_days(spec, draws, truth, b)
        cost[spec.name] = _costs(t_star[spec.name], draws.horizon, b)
    truth_desc = spec_to_dict(truth.family) if truth.family is not None else "explicit"
    config = {"true_dist": truth_desc, "horizon_bound": truth.horizon_bound, "buy_cost": b,
              "n_trials": n_trials, "base_seed": base_seed, "policies": [s.snapshot() for s in specs]}
    return TrialBatch(names, draws.seeds, draws.horizon, b, t_star, cost, config)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricsSummary:
    policy: str
    n: int
    mean_cr: float
    ci_lo: float
    ci_hi: float
    p95: float
    success_rate: float
    ecr_empirical: float
    ecr_stderr: float


def nearest_rank(values: np.ndarray, q: float) -> float:
    """Nearest-rank percentile: the ceil(q n)-th smallest value (q in (0, 1])."""
    v = np.sort(np.asarray(values, dtype=float))
    rank = max(1, math.ceil(q * v.size - 1e-12))
    return float(v[rank - 1])


def summarize_costs(policy: str, cost: np.ndarray, opt: np.ndarray, rho: float = 1.5) -> MetricsSummary:
    cost = np.asarray(cost, dtype=float)
    opt = np.asarray(opt, dtype=float)
    n = cost.size
    if n == 0:
        raise EmptyBatch("cannot summarize an empty batch")
    ratio = cost / opt
    mean = float(ratio.mean())
    sd = float(ratio.std(ddof=1)) if n > 1 else 0.0
    half = 1.96 * sd / math.sqrt(n)
    ecr = float(cost.mean() / opt.mean())
    # delta method for a ratio of means
    resid = cost - ecr * opt
    ecr_se = float(resid.std(ddof=1) / math.sqrt(n) / opt.mean()) if n > 1 else 0.0
    return MetricsSummary(policy, n, mean, mean - half, mean + half, nearest_rank(ratio, 0.95),
                          float(np.mean(ratio <= rho)), ecr, ecr_se)


def summarize(batch: TrialBatch, rho: float = 1.5) -> dict[str, MetricsSummary]:
    """One :class:`MetricsSummary` per policy; ``rho`` is the success threshold on the ratio."""
    if batch.horizon.size == 0:
        raise EmptyBatch("cannot summarize an empty batch")
    return {p: summarize_costs(p, batch.cost[p], batch.opt, rho) for p in batch.policies}


SUMMARY_HEADER = ["policy", "mean_cr", "ci_lo", "ci_hi", "p95", "success_rate", "ecr_empirical"]


def summary_row(s: MetricsSummary) -> list:
    return [s.policy, s.mean_cr, s.ci_lo, s.ci_hi, s.p95, s.success_rate, s.ecr_empirical]


def write_summary_csv(summaries: Iterable[MetricsSummary], path) -> None:
    write_rows(path, SUMMARY_HEADER, [summary_row(s) for s in summaries])


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_config(config: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    buy_cost: float = 100.0
    horizon: int = 500
    trials: int = 10_000
    seed: int = 42
    success_threshold: float = 1.5
    lam: float = 0.5
    noise: float = 0.3


@dataclass
class Report:
    """Named tables (header, rows) plus the config snapshot that produced them."""

    name: str
    config: dict
    tables: dict[str, tuple[list[str], list[list]]]
    notes: dict = field(default_factory=dict)

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for fname, (header, rows) in self.tables.items():
            write_rows(out / fname, header, rows)
            written.append(out / fname)
        snapshot = {"experiment": self.name, **self.config}
        if self.notes:
            snapshot["notes"] = self.notes
        write_config(snapshot, out / "config.json")
        written.append(out / "config.json")
        return written

    def table(self, fname: str) -> list[dict]:
        header, rows = self.tables[fname]
        return [dict(zip(header, row)) for row in rows]


Q1_REGIMES = (0.42, 0.33, 0.31)
Q1_MU = 100.0
Q1_PERTURBATIONS = (
    ("mean", MeanShift(-40)), ("mean", MeanShift(-20)), ("mean", MeanShift(-10)),
    ("mean", MeanShift(10)), ("mean", MeanShift(20)), ("mean", MeanShift(40)),
    ("variance", VarianceScale(0.5)), ("variance", VarianceScale(0.75)),
    ("variance", VarianceScale(1.5)), ("variance", VarianceScale(2.0)),
    ("shape", ShapeSwap("uniform")), ("shape", ShapeSwap("geometric")),
)
Q1_TV_BINS = (0.0, 0.1, 0.2, 0.3, 0.5, 1.0)


def _label(kind) -> str:
    if isinstance(kind, MeanShift):
        return f"mean_shift({kind.delta:+g})"
    if isinstance(kind, VarianceScale):
        return f"variance_scale({kind.factor:g})"
    return f"shape_swap({kind.target})"


def experiment_q1(config: ExperimentConfig = ExperimentConfig()) -> Report:
    """Misspecified priors: true Gaussian(mu=100, sigma=r*mu), assumed prior perturbed."""
    b, m = config.buy_cost, config.horizon
    cells, pooled = [], []
    for r in Q1_REGIMES:
        truth = build_prior(TruncatedGaussian(Q1_MU, r * Q1_MU), m)
        draws = draw_trials(truth, config.trials, config.seed)
        opt = np.minimum(draws.horizon, b).astype(float)
        t_ref = purchase_day(truth, b).purchase_day
        ref_exact = policy_expected_cost(truth, t_ref, b)
        ref_mc = _costs(np.full(draws.horizon.size, t_ref), draws.horizon, b).mean()
        opt_exact = opt_expected_cost(truth, b)
        for error_type, kind in (("none", None),) + Q1_PERTURBATIONS:
            assumed = truth if kind is None else perturb(truth, kind)
            t_star = purchase_day(assumed, b).purchase_day
            cost = _costs(np.full(draws.horizon.size, t_star), draws.horizon, b)
            s = summarize_costs("bayesian", cost, opt, config.success_threshold)
            exact = policy_expected_cost(truth, t_star, b)
            tv = tv_distance(truth, assumed)
            cells.append([r, Q1_MU, r * Q1_MU, error_type, "none" if kind is None else _label(kind), tv,
                          t_star, s.mean_cr, s.ecr_empirical, exact / opt_exact,
                          100.0 * (exact / ref_exact - 1.0), 100.0 * (cost.mean() / ref_mc - 1.0)])
            if kind is not None:
                pooled.append((tv, cost / opt))
    header = ["sigma_over_mu", "mu", "sigma", "error_type", "perturbation", "tv", "t_star", "mean_cr",
              "ecr_empirical", "ecr_exact", "cost_increase_pct", "mc_cost_increase_pct"]

    breakdown = []
    for error_type in ("mean", "variance", "shape"):
        inc = [row[10] for row in cells if row[3] == error_type]
        breakdown.append([error_type, len(inc), float(np.mean(inc)), float(np.max(inc))])
    perturbed = [row[10] for row in cells if row[3] != "none"]

    bins = []
    edges = Q1_TV_BINS
    for lo, hi in zip(edges, edges[1:]):
        ratios = [rat for tv, rat in pooled if lo <= tv < hi or (hi == edges[-1] and tv == hi)]
        if not ratios:
            bins.append([lo, hi, 0, 0, "", "", "", "", "", ""])
            continue
        allr = np.concatenate(ratios)
        bins.append([lo, hi, len(ratios), allr.size, float(allr.mean())]
                    + [nearest_rank(allr, q) for q in (0.05, 0.25, 0.5, 0.75, 0.95)])
    return Report(
        "q1", {**asdict(config), "regimes": list(Q1_REGIMES), "mu": Q1_MU},
        {
            "q1_cells.csv": (header, cells),
            "q1_error_types.csv": (["error_type", "n_cells", "mean_cost_increase_pct",
                                    "max_cost_increase_pct"], breakdown),
            "q1_tv_bins.csv": (["tv_lo", "tv_hi", "n_cells", "n_trials", "mean_cr", "p05", "p25", "p50",
                                "p75", "p95"], bins),
        },
        notes={"average_cost_increase_pct": float(np.mean(perturbed)),
               "worst_cost_increase_pct": float(np.max(perturbed))},
    )


def q2_families(horizon: int) -> dict[str, FamilySpec]:
    return {
        "uniform": Uniform(horizon),
        "gaussian": TruncatedGaussian(100.0, 30.0),
        "exponential": exponential_as_geometric(0.01),
    }


def experiment_q2(config: ExperimentConfig = ExperimentConfig()) -> Report:
    """Assumed prior = true distribution; every policy on every family, plus pooled rows."""
    b, m = config.buy_cost, config.horizon
    policies = [
        PolicySpec("bayesian"),
        PolicySpec("point_prediction", noise=config.noise, label="prediction_based"),
        PolicySpec("augmented", lam=config.lam, noise=config.noise, label="augmented_lambda_threshold"),
        PolicySpec("randomized"),
        PolicySpec("deterministic"),
    ]
    rows = []
    pooled: dict[str, tuple[list, list]] = {p.name: ([], []) for p in policies}
    for family, spec in q2_families(m).items():
        batch = run_trials(spec, policies, b, config.trials, config.seed, m)
        for name, s in summarize(batch, config.success_threshold).items():
            rows.append([family] + summary_row(s))
            pooled[name][0].append(batch.cost[name])
            pooled[name][1].append(batch.opt)
    for name, (costs, opts) in pooled.items():
        s = summarize_costs(name, np.concatenate(costs), np.concatenate(opts), config.success_threshold)
        rows.append(["pooled"] + summary_row(s))
    cfg = {**asdict(config), "families": {k: spec_to_dict(v) for k, v in q2_families(m).items()},
           "policies": [p.snapshot() for p in policies]}
    return Report("q2", cfg, {"q2_policies.csv": (["family"] + SUMMARY_HEADER, rows)})


Q3_BIASES = (0.5, 0.8, 1.0, 1.2, 1.5, 2.0)
Q3_TRUE_HORIZON = 100


def experiment_q3(config: ExperimentConfig = ExperimentConfig()) -> Report:
    """Single noisy forecast T_hat ~ N(alpha T, (beta T)^2) with T fixed."""
    b, m = config.buy_cost, config.horizon
    rows = []
    for alpha in Q3_BIASES:
        policies = [PolicySpec("bayesian_prediction", bias=alpha, noise=config.noise, label="bayesian"),
                    PolicySpec("point_prediction", bias=alpha, noise=config.noise, label="point")]
        batch = run_trials(PointMass(Q3_TRUE_HORIZON), policies, b, config.trials, config.seed, m)
        s = summarize(batch, config.success_threshold)
        bay, pt = s["bayesian"], s["point"]
        rows.append([alpha, abs(alpha - 1.0), bay.mean_cr, bay.ci_lo, bay.ci_hi,
                     pt.mean_cr, pt.ci_lo, pt.ci_hi])
    header = ["alpha", "abs_bias", "bayesian_cr", "bayesian_ci_lo", "bayesian_ci_hi",
              "point_cr", "point_ci_lo", "point_ci_hi"]
    cfg = {**asdict(config), "true_horizon": Q3_TRUE_HORIZON, "biases": list(Q3_BIASES)}
    return Report("q3", cfg, {"q3_bias.csv": (header, rows)})


Q4_PRIORS = {
    "bimodal": "0.7*gaussian(mu=10,sigma=3)+0.3*gaussian(mu=25,sigma=5)",
    "trimodal": "1/3*point(k=8)+1/3*point(k=20)+1/3*point(k=40)",
    "seasonal": "0.3*gaussian(mu=5,sigma=3)+0.7*gaussian(mu=30,sigma=10)",
}


def experiment_q4(config: ExperimentConfig = ExperimentConfig()) -> Report:
    """Multi-modal priors: myopic vs brute-force purchase day, survival and E_rent curves."""
    b, m = config.buy_cost, config.horizon
    summary, curves = [], []
    for case, text in Q4_PRIORS.items():
        prior = build_prior(parse_prior_spec(text), m)
        myopic = purchase_day(prior, b).purchase_day
        oracle = oracle_purchase_day(prior, b)
        summary.append([case, text, is_log_concave(prior), myopic, oracle,
                        policy_expected_cost(prior, myopic, b), policy_expected_cost(prior, oracle, b),
                        prior.mean()])
        e_rent = expected_rent_curve(prior)
        for t in range(1, m + 2):
            e = e_rent[t - 1] if t <= m and not np.isnan(e_rent[t - 1]) else ""
            pmf = float(prior.mass[t - 1]) if t <= m else 0.0
            curves.append([case, t, pmf, float(prior.suffix_mass[t - 1]), e])
    return Report(
        "q4", {**asdict(config), "priors": Q4_PRIORS},
        {
            "q4_summary.csv": (["case", "prior", "log_concave", "myopic_t_star", "oracle_t_star",
                                "myopic_expected_cost", "oracle_expected_cost", "mean_horizon"], summary),
            "q4_curves.csv": (["case", "t", "pmf", "survival", "e_rent"], curves),
        },
    )


EXPERIMENTS = {"q1": experiment_q1, "q2": experiment_q2, "q3": experiment_q3, "q4": experiment_q4}
