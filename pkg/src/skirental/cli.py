"""``skirental`` command line.

Subcommands: ``decide``, ``simulate``, ``experiment {q1,q2,q3,q4}``, ``fuse``,
``adapt``.  Settings come from built-in defaults, then an optional JSON
``--config`` file, then explicit flags.  Every command that writes files
also writes ``config.json``, a snapshot sufficient to re-run it.

Exit codes: 0 success, 1 I/O error, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .adaptive import run_adaptive
from .errors import SkiRentalError
from .fusion import fuse, load_predictions
from .policy import purchase_day
from .priors import (
    DiscretePrior,
    Uniform,
    build_prior,
    load_prior_file,
    natural_bound,
    parse_prior_spec,
    spec_to_dict,
    write_prior_file,
)

DEFAULTS = {
    "buy_cost": 100.0,
    "horizon": None,
    "prior": None,
    "prior_file": None,
    "assumed_prior": None,
    "trials": 10_000,
    "seed": 42,
    "success_threshold": 1.5,
    "out": None,
    "policy": "all",
    "lam": 0.5,
    "pred_bias": 1.0,
    "pred_noise": 0.3,
    "rounds": 2000,
    "method": "suffix",
    "trace": False,
    "predictions": None,
}
DEFAULT_HORIZON = 500
# written into snapshots for the reader; ignored when a snapshot is read back
SNAPSHOT_ONLY_KEYS = {"command", "experiment", "prior_resolved", "notes"}


def _resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - set(DEFAULTS) - SNAPSHOT_ONLY_KEYS
        if unknown:
            raise SkiRentalError(f"unknown config keys: {sorted(unknown)}")
        cfg.update({k: v for k, v in loaded.items() if k in DEFAULTS})
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _load_prior(cfg: dict, required: bool = True) -> DiscretePrior | None:
    if cfg["prior_file"]:
        return load_prior_file(cfg["prior_file"], cfg["horizon"])
    if cfg["prior"]:
        spec = parse_prior_spec(cfg["prior"])
        m = cfg["horizon"] or natural_bound(spec) or DEFAULT_HORIZON
        return build_prior(spec, m)
    if required:
        raise SkiRentalError("a prior is required: pass --prior or --prior-file")
    return None


def _out_dir(cfg: dict, default: str) -> Path:
    out = Path(cfg["out"] or default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _snapshot(cfg: dict, command: str, prior: DiscretePrior | None = None) -> dict:
    # the output location is left out so that repeated runs write identical snapshots
    snap = {"command": command, **{k: v for k, v in cfg.items() if k != "out"}}
    if prior is not None and prior.family is not None and not cfg["prior_file"]:
        snap["prior_resolved"] = spec_to_dict(prior.family)
        snap["horizon"] = prior.horizon_bound
    return snap


def cmd_decide(cfg: dict) -> int:
    prior = _load_prior(cfg)
    out = purchase_day(prior, cfg["buy_cost"], method=cfg["method"], trace=cfg["trace"])
    if out.trace:
        print("day,e_rent,action")
        for entry in out.trace:
            print(f"{entry.day},{entry.expected_rent!r},{entry.action}")
    if out.never_buys:
        print(f"never (t*={out.purchase_day})")
    else:
        print(f"t*={out.purchase_day}")
    return 0


def _policies(cfg: dict, assumed) -> list[harness.PolicySpec]:
    noise, bias, lam = cfg["pred_noise"], cfg["pred_bias"], cfg["lam"]
    table = {
        "bayesian": harness.PolicySpec("bayesian", assumed=assumed),
        "point_prediction": harness.PolicySpec("point_prediction", bias=bias, noise=noise),
        "augmented": harness.PolicySpec("augmented", lam=lam, bias=bias, noise=noise),
        "randomized": harness.PolicySpec("randomized"),
        "deterministic": harness.PolicySpec("deterministic"),
        "bayesian_prediction": harness.PolicySpec("bayesian_prediction", bias=bias, noise=noise),
    }
    if cfg["policy"] == "all":
        names = ["bayesian", "point_prediction", "augmented", "randomized", "deterministic"]
    else:
        names = [p.strip() for p in cfg["policy"].split(",")]
    unknown = [n for n in names if n not in table]
    if unknown:
        raise SkiRentalError(f"unknown policies {unknown}; choose from {sorted(table)} or 'all'")
    return [table[n] for n in names]


def cmd_simulate(cfg: dict) -> int:
    truth = _load_prior(cfg)
    assumed = None
    if cfg["assumed_prior"]:
        assumed = build_prior(parse_prior_spec(cfg["assumed_prior"]), truth.horizon_bound)
    batch = harness.run_trials(truth, _policies(cfg, assumed), cfg["buy_cost"], cfg["trials"],
                               cfg["seed"], truth.horizon_bound)
    summaries = harness.summarize(batch, cfg["success_threshold"])
    out = _out_dir(cfg, "results")
    batch.write_trials_csv(out / "trials.csv")
    harness.write_summary_csv(summaries.values(), out / "summary.csv")
    harness.write_config(_snapshot(cfg, "simulate", truth), out / "config.json")
    print(",".join(harness.SUMMARY_HEADER))
    for s in summaries.values():
        print(",".join(str(v) for v in harness.summary_row(s)))
    return 0


def cmd_experiment(cfg: dict, which: str) -> int:
    config = harness.ExperimentConfig(
        buy_cost=cfg["buy_cost"], horizon=cfg["horizon"] or DEFAULT_HORIZON, trials=cfg["trials"],
        seed=cfg["seed"], success_threshold=cfg["success_threshold"], lam=cfg["lam"],
        noise=cfg["pred_noise"])
    report = harness.EXPERIMENTS[which](config)
    out = _out_dir(cfg, f"results/{which}")
    for path in report.write(out):
        print(path)
    for key, value in report.notes.items():
        print(f"{key}={value}")
    return 0


def cmd_fuse(cfg: dict) -> int:
    if not cfg["predictions"]:
        raise SkiRentalError("--predictions is required")
    initial = _load_prior(cfg, required=False)
    if initial is None:
        initial = build_prior(Uniform(), cfg["horizon"] or DEFAULT_HORIZON)
    preds = load_predictions(cfg["predictions"])
    fused = fuse(initial, preds)
    out = Path(cfg["out"] or "fused_prior.txt")
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    write_prior_file(fused, out, header=f"fused from {len(preds)} predictions in {cfg['predictions']}")
    harness.write_config(_snapshot(cfg, "fuse", initial), out.with_suffix(".config.json"))
    print(f"wrote {out} (mean={fused.mean():.6g}, t*={purchase_day(fused, cfg['buy_cost']).purchase_day})")
    return 0


def cmd_adapt(cfg: dict) -> int:
    truth = _load_prior(cfg)
    traj = run_adaptive(cfg["rounds"], truth, cfg["buy_cost"], cfg["seed"], truth.horizon_bound)
    out = _out_dir(cfg, "results")
    traj.write_csv(out / "regret.csv")
    harness.write_config(_snapshot(cfg, "adapt", truth), out / "config.json")
    print(f"rounds={cfg['rounds']} cum_regret={traj.cum_regret[-1]!r} fitted_C={traj.fitted_constant!r}")
    return 0


def _common(p: argparse.ArgumentParser, *, trials=False, out=True) -> None:
    p.add_argument("--config", help="JSON file of settings; explicit flags override it")
    p.add_argument("--buy-cost", dest="buy_cost", type=float, help="buy cost b in rent-days (default 100)")
    p.add_argument("--horizon", type=int, help="horizon bound M")
    p.add_argument("--prior", help="prior spec, e.g. 'uniform(N=500)' or 'gaussian(mu=100,sigma=30)'")
    p.add_argument("--prior-file", dest="prior_file", help="text file of 'k,weight' lines")
    p.add_argument("--seed", type=int, help="base seed (default 42)")
    if trials:
        p.add_argument("--trials", type=int, help="Monte Carlo trials (default 10000)")
        p.add_argument("--success-threshold", dest="success_threshold", type=float,
                       help="ratio counted as success (default 1.5)")
    if out:
        p.add_argument("--out", help="output directory or file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skirental", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="purchase day for a prior")
    _common(p, out=False)
    p.add_argument("--trace", action="store_true", default=None, help="print E_rent for each evaluated day")
    p.add_argument("--method", choices=["suffix", "dense", "sparse"])

    p = sub.add_parser("simulate", help="Monte Carlo trials; writes trials.csv and summary.csv")
    _common(p, trials=True)
    p.add_argument("--assumed-prior", dest="assumed_prior", help="Bayesian prior if it differs from the truth")
    p.add_argument("--policy", help="comma list of policies or 'all'")
    p.add_argument("--lambda", dest="lam", type=float, help="trust parameter of the augmented baseline")
    p.add_argument("--pred-bias", dest="pred_bias", type=float, help="forecast bias alpha")
    p.add_argument("--pred-noise", dest="pred_noise", type=float, help="forecast relative noise beta")

    p = sub.add_parser("experiment", help="run one of the experiments q1..q4")
    p.add_argument("which", choices=sorted(harness.EXPERIMENTS))
    _common(p, trials=True)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--pred-noise", dest="pred_noise", type=float)

    p = sub.add_parser("fuse", help="fuse forecasts into a posterior prior file")
    _common(p)
    p.add_argument("--predictions", help="text file of 'T_hat,sigma' lines")

    p = sub.add_parser("adapt", help="repeated seasons with online prior learning; writes regret.csv")
    _common(p)
    p.add_argument("--rounds", type=int, help="number of seasons R (default 2000)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        if args.command == "decide":
            return cmd_decide(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "experiment":
            return cmd_experiment(cfg, args.which)
        if args.command == "fuse":
            return cmd_fuse(cfg)
        return cmd_adapt(cfg)
    except (SkiRentalError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
