"""Discrete priors over the season length T in {1..M}.

A :class:`DiscretePrior` is an immutable, normalized pmf.  Priors are built
from small family descriptions (:class:`Uniform`, :class:`TruncatedGeometric`,
:class:`TruncatedGaussian`, :class:`PointMass`, :class:`Explicit`,
:class:`Mixture`) with :func:`build_prior`, or loaded from ``k,weight`` text
files with :func:`load_prior_file`.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np
from scipy.optimize import brentq

from .errors import (
    InvalidPerturbation,
    InvalidSpec,
    MismatchedHorizon,
    OutOfRange,
    ZeroMass,
    ZeroSurvival,
)

NORMALIZATION_TOL = 1e-12
_TINY = np.finfo(float).tiny


# ---------------------------------------------------------------------------
# family specifications
# ---------------------------------------------------------------------------


def _check_n(n):
    if n is not None and (int(n) != n or n < 1):
        raise InvalidSpec(f"support bound N must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class Uniform:
    """pi_k = 1/N on {1..N}; ``n=None`` means N = M."""

    n: int | None = None

    def __post_init__(self):
        _check_n(self.n)


@dataclass(frozen=True)
class TruncatedGeometric:
    """pi_k proportional to p(1-p)^(k-1) on {1..N}."""

    p: float
    n: int | None = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise InvalidSpec(f"geometric p must lie in (0, 1), got {self.p!r}")
        _check_n(self.n)


@dataclass(frozen=True)
class TruncatedGaussian:
    """pi_k proportional to exp(-(k-mu)^2 / (2 sigma^2)) on {1..N}, evaluated at integers."""

    mu: float
    sigma: float
    n: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise InvalidSpec(f"gaussian mu must be finite, got {self.mu!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise InvalidSpec(f"gaussian sigma must be positive, got {self.sigma!r}")
        _check_n(self.n)


@dataclass(frozen=True)
class PointMass:
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidSpec(f"point mass location must be a positive integer, got {self.k!r}")


@dataclass(frozen=True)
class Explicit:
    """Arbitrary nonnegative weights given as ``(k, weight)`` pairs."""

    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((int(k), float(w)) for k, w in self.points))
        for k, w in self.points:
            if k < 1:
                raise InvalidSpec(f"day index must be >= 1, got {k}")
            if not (w >= 0 and math.isfinite(w)):
                raise InvalidSpec(f"weight for day {k} must be finite and >= 0, got {w}")


@dataclass(frozen=True)
class Mixture:
    """Convex combination of component families; weights must sum to 1."""

    components: tuple[tuple[float, "FamilySpec"], ...]

    def __post_init__(self):
        comps = tuple((float(w), spec) for w, spec in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidSpec("mixture needs at least one component")
        if any(w < 0 for w, _ in comps):
            raise InvalidSpec("mixture weights must be >= 0")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidSpec(f"mixture weights sum to {total!r}, expected 1")


FamilySpec = Union[Uniform, TruncatedGeometric, TruncatedGaussian, PointMass, Explicit, Mixture]


def exponential_as_geometric(rate: float, n: int | None = None) -> TruncatedGeometric:
    """Discrete analogue of Exp(rate): geometric with p = 1 - exp(-rate).

    Matches the exponential's survival function at integer days.
    """
    if not rate > 0:
        raise InvalidSpec(f"exponential rate must be positive, got {rate!r}")
    return TruncatedGeometric(p=-math.expm1(-rate), n=n)


def natural_bound(spec: FamilySpec) -> int | None:
    """Largest day the family can put mass on, or None if it needs an external M."""
    if isinstance(spec, (Uniform, TruncatedGeometric, TruncatedGaussian)):
        return spec.n
    if isinstance(spec, PointMass):
        return spec.k
    if isinstance(spec, Explicit):
        return max(k for k, _ in spec.points) if spec.points else None
    bounds = [natural_bound(s) for _, s in spec.components]
    return None if any(b is None for b in bounds) else max(bounds)


# ---------------------------------------------------------------------------
# the prior itself
# ---------------------------------------------------------------------------


def _normalize(weights: np.ndarray) -> np.ndarray:
    """Normalize to a pmf, flushing subnormal entries to exactly zero.

    Subnormal probabilities carry too few significant bits for the
    conditional (survival-renormalized) quantities computed downstream.
    """
    w = np.asarray(weights, dtype=float)
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidSpec("weights must be finite and nonnegative")
    total = w.sum()
    if not total > 0:
        raise ZeroMass("prior has zero total mass")
    p = w / total
    p[p < _TINY] = 0.0
    total = p.sum()
    if not total > 0:
        raise ZeroMass("prior mass underflows to zero")
    return p / total


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscretePrior:
    """Normalized pmf over days 1..``horizon_bound``.

    ``support`` holds 1-based day indices and ``weights`` their probabilities.
    In the dense representation ``support`` is every day 1..M (zeros
    included); in the sparse one only nonzero days, strictly increasing.
    ``family`` remembers the generating family when there is one, which
    :func:`perturb` needs for parametric rebuilds.
    """

    horizon_bound: int
    support: np.ndarray
    weights: np.ndarray
    representation: str = "dense"
    family: FamilySpec | None = field(default=None, compare=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_weights(cls, weights, family: FamilySpec | None = None, sparse: bool = False) -> "DiscretePrior":
        """Build from a length-M weight vector (index 0 is day 1); renormalizes."""
        p = _normalize(np.array(weights, dtype=float).ravel())
        if p.size < 1:
            raise InvalidSpec("horizon bound must be >= 1")
        dense = cls._raw(p.size, np.arange(1, p.size + 1), p, "dense", family)
        return dense.to_sparse() if sparse else dense

    @classmethod
    def from_points(cls, points: Iterable[tuple[int, float]], horizon_bound: int | None = None,
                    sparse: bool = False) -> "DiscretePrior":
        """Build from ``(k, weight)`` pairs; repeated days accumulate."""
        pts = [(int(k), float(w)) for k, w in points]
        if not pts:
            raise ZeroMass("no support points given")
        m = horizon_bound if horizon_bound is not None else max(k for k, _ in pts)
        dense = np.zeros(m)
        for k, w in pts:
            if not 1 <= k <= m:
                raise OutOfRange(f"day {k} outside 1..{m}")
            if not (w >= 0 and math.isfinite(w)):
                raise InvalidSpec(f"weight for day {k} must be finite and >= 0")
            dense[k - 1] += w
        return cls.from_weights(dense, family=Explicit(tuple(pts)), sparse=sparse)

    @classmethod
    def _raw(cls, m, support, weights, representation, family):
        return cls(int(m), _frozen(np.asarray(support, dtype=np.int64)),
                   _frozen(np.asarray(weights, dtype=float)), representation, family)

    # -- representation ----------------------------------------------------

    def to_sparse(self) -> "DiscretePrior":
        if self.representation == "sparse":
            return self
        nz = self.weights > 0
        return self._raw(self.horizon_bound, self.support[nz].copy(), self.weights[nz].copy(),
                         "sparse", self.family)

    def to_dense(self) -> "DiscretePrior":
        if self.representation == "dense":
            return self
        return self._raw(self.horizon_bound, np.arange(1, self.horizon_bound + 1), self.mass.copy(),
                         "dense", self.family)

    @cached_property
    def mass(self) -> np.ndarray:
        """Dense pmf; ``mass[k-1]`` is pi_k."""
        if self.representation == "dense":
            return self.weights
        out = np.zeros(self.horizon_bound)
        out[self.support - 1] = self.weights
        return _frozen(out)

    @cached_property
    def nonzero_support(self) -> np.ndarray:
        return _frozen(self.support[self.weights > 0])

    @cached_property
    def suffix_mass(self) -> np.ndarray:
        """Z_t for t = 1..M+1 at index t-1, accumulated backward (Z_{M+1} = 0)."""
        out = np.zeros(self.horizon_bound + 1)
        out[:-1] = np.cumsum(self.mass[::-1])[::-1]
        return _frozen(out)

    @cached_property
    def suffix_moment(self) -> np.ndarray:
        """S1_t = sum_{k>=t} k pi_k for t = 1..M+1, accumulated backward."""
        days = np.arange(1, self.horizon_bound + 1)
        out = np.zeros(self.horizon_bound + 1)
        out[:-1] = np.cumsum((days * self.mass)[::-1])[::-1]
        return _frozen(out)

    def mean(self) -> float:
        return float(self.support @ self.weights)

    def variance(self) -> float:
        mu = self.mean()
        return float(((self.support - mu) ** 2) @ self.weights)

    def points(self) -> list[tuple[int, float]]:
        """Nonzero ``(k, pi_k)`` pairs."""
        nz = self.weights > 0
        return [(int(k), float(w)) for k, w in zip(self.support[nz], self.weights[nz])]

    def __repr__(self):
        return (f"DiscretePrior(M={self.horizon_bound}, n_support={self.nonzero_support.size}, "
                f"representation={self.representation!r}, family={self.family!r})")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _resolve_n(n, m):
    n = m if n is None else int(n)
    if not 1 <= n <= m:
        raise InvalidSpec(f"support bound N={n} must satisfy 1 <= N <= M={m}")
    return n


def _from_log_weights(logw: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros(m)
    out[: logw.size] = np.exp(logw - logw.max())
    return out


def build_prior(spec: FamilySpec, horizon_bound: int) -> DiscretePrior:
    """Materialize a family spec as a normalized prior over {1..horizon_bound}.

    Raises
    ------
    InvalidSpec
        Parameters out of range (including N > M).
    ZeroMass
        Every weight is zero, e.g. an explicit spec of all-zero weights.
    """
    m = int(horizon_bound)
    if m < 1:
        raise InvalidSpec(f"horizon bound must be >= 1, got {horizon_bound!r}")
    if isinstance(spec, Uniform):
        n = _resolve_n(spec.n, m)
        w = np.zeros(m)
        w[:n] = 1.0
        resolved = Uniform(n)
    elif isinstance(spec, TruncatedGeometric):
        n = _resolve_n(spec.n, m)
        w = _from_log_weights(np.arange(n) * math.log1p(-spec.p), m)
        resolved = TruncatedGeometric(spec.p, n)
    elif isinstance(spec, TruncatedGaussian):
        n = _resolve_n(spec.n, m)
        days = np.arange(1, n + 1)
        w = _from_log_weights(-((days - spec.mu) ** 2) / (2.0 * spec.sigma ** 2), m)
        resolved = TruncatedGaussian(spec.mu, spec.sigma, n)
    elif isinstance(spec, PointMass):
        if spec.k > m:
            raise InvalidSpec(f"point mass at {spec.k} exceeds M={m}")
        w = np.zeros(m)
        w[spec.k - 1] = 1.0
        resolved = spec
    elif isinstance(spec, Explicit):
        prior = DiscretePrior.from_points(spec.points, m)
        return DiscretePrior._raw(m, prior.support, prior.weights, "dense", spec)
    elif isinstance(spec, Mixture):
        w = np.zeros(m)
        parts = []
        for weight, comp in spec.components:
            sub = build_prior(comp, m)
            parts.append((weight, sub.family))
            w += weight * sub.mass
        resolved = Mixture(tuple(parts))
    else:
        raise InvalidSpec(f"unknown prior family {spec!r}")
    return DiscretePrior.from_weights(w, family=resolved)


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------


def survival(prior: DiscretePrior, t: int) -> float:
    """Pr(T >= t) for 1 <= t <= M+1."""
    if not 1 <= t <= prior.horizon_bound + 1:
        raise OutOfRange(f"t={t} outside 1..{prior.horizon_bound + 1}")
    return float(prior.suffix_mass[t - 1])


def hazard(prior: DiscretePrior, t: int) -> float:
    """Discrete hazard pi_t / Pr(T >= t)."""
    s = survival(prior, t)
    if s <= 0:
        raise ZeroSurvival(f"no mass at or after day {t}")
    return float(prior.mass[t - 1] / s)


def tv_distance(a: DiscretePrior, b: DiscretePrior) -> float:
    if a.horizon_bound != b.horizon_bound:
        raise MismatchedHorizon(f"M={a.horizon_bound} vs M={b.horizon_bound}")
    return float(0.5 * np.abs(a.mass - b.mass).sum())


def is_log_concave(prior: DiscretePrior, rtol: float = 1e-9) -> bool:
    """True iff the support is contiguous and pi_k^2 >= pi_{k-1} pi_{k+1} inside it.

    Checked in log space so that tiny tail masses do not underflow the
    products; ``rtol`` absorbs rounding for exactly log-linear pmfs
    (truncated geometric).
    """
    nz = np.flatnonzero(prior.mass > 0)
    if nz.size == 0:
        return False
    if nz[-1] - nz[0] + 1 != nz.size:
        return False
    if nz.size < 3:
        return True
    logp = np.log(prior.mass[nz[0]: nz[-1] + 1])
    second_diff = logp[2:] - 2.0 * logp[1:-1] + logp[:-2]
    scale = np.maximum(1.0, np.abs(logp[1:-1]))
    return bool(np.all(second_diff <= rtol * scale))


# ---------------------------------------------------------------------------
# perturbations (prior misspecification)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeanShift:
    delta: float


@dataclass(frozen=True)
class VarianceScale:
    factor: float


@dataclass(frozen=True)
class ShapeSwap:
    target: str  # "uniform" | "geometric" | "gaussian"


Perturbation = Union[MeanShift, VarianceScale, ShapeSwap]


def _shift_support(prior: DiscretePrior, delta: float) -> DiscretePrior:
    if delta != round(delta):
        raise InvalidPerturbation(f"non-parametric priors only accept integer shifts, got {delta}")
    m = prior.horizon_bound
    days = np.clip(prior.nonzero_support + int(round(delta)), 1, m)
    w = np.zeros(m)
    np.add.at(w, days - 1, prior.weights[prior.weights > 0])
    pts = [(int(k) + 1, float(x)) for k, x in enumerate(w) if x > 0]
    return DiscretePrior.from_weights(w, family=Explicit(tuple(pts)))


def _map_gaussians(spec: FamilySpec, fn) -> FamilySpec | None:
    if isinstance(spec, TruncatedGaussian):
        return fn(spec)
    if isinstance(spec, Mixture):
        comps = [(w, _map_gaussians(s, fn)) for w, s in spec.components]
        if any(s is None for _, s in comps):
            return None
        return Mixture(tuple(comps))
    return None


def _geometric_mean(p: float, n: int) -> float:
    q_n = math.exp(n * math.log1p(-p))
    return 1.0 / p - n * q_n / (-math.expm1(n * math.log1p(-p)))


def perturb(prior: DiscretePrior, kind: Perturbation) -> DiscretePrior:
    """Return a deliberately misspecified copy of ``prior``.

    * ``MeanShift(d)``: Gaussian families (and mixtures of them) rebuild with
      mu + d; any other prior has its mass moved by the integer d, clipped to
      [1, M].
    * ``VarianceScale(c)``: Gaussian sigma -> c * sigma.
    * ``ShapeSwap(target)``: rebuild in another family with the same mean
      (and, for the Gaussian target, the same standard deviation).
    """
    m = prior.horizon_bound
    fam = prior.family
    try:
        if isinstance(kind, MeanShift):
            if kind.delta == 0:
                return prior
            shifted = _map_gaussians(fam, lambda g: TruncatedGaussian(g.mu + kind.delta, g.sigma, g.n)) \
                if fam is not None else None
            if shifted is not None:
                return build_prior(shifted, m)
            return _shift_support(prior, kind.delta)
        if isinstance(kind, VarianceScale):
            if not kind.factor > 0:
                raise InvalidPerturbation(f"variance scale must be positive, got {kind.factor}")
            scaled = _map_gaussians(fam, lambda g: TruncatedGaussian(g.mu, g.sigma * kind.factor, g.n)) \
                if fam is not None else None
            if scaled is None:
                raise InvalidPerturbation("variance scaling needs a Gaussian-family prior")
            return build_prior(scaled, m)
        if isinstance(kind, ShapeSwap):
            mu, sd = prior.mean(), math.sqrt(prior.variance())
            if kind.target == "uniform":
                return build_prior(Uniform(min(m, max(1, round(2 * mu - 1)))), m)
            if kind.target == "gaussian":
                return build_prior(TruncatedGaussian(mu, max(sd, 1e-6)), m)
            if kind.target == "geometric":
                if not 1.0 < mu < (m + 1) / 2:
                    raise InvalidPerturbation(f"no truncated geometric on 1..{m} has mean {mu:.4g}")
                p = brentq(lambda p: _geometric_mean(p, m) - mu, 1e-12, 1 - 1e-12, xtol=1e-15)
                return build_prior(TruncatedGeometric(p), m)
            raise InvalidPerturbation(f"unknown target family {kind.target!r}")
    except InvalidSpec as exc:
        raise InvalidPerturbation(str(exc)) from exc
    raise InvalidPerturbation(f"unknown perturbation {kind!r}")


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

_FAMILY_ALIASES = {
    "uniform": "uniform", "unif": "uniform",
    "geometric": "geometric", "geom": "geometric",
    "gaussian": "gaussian", "normal": "gaussian",
    "point": "point", "delta": "point",
    "exponential": "exponential", "exp": "exponential",
}


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _number(text: str) -> float:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidSpec(f"cannot parse number {text!r}") from exc


_CALL = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")


def _parse_call(text: str) -> FamilySpec:
    match = _CALL.match(text)
    if not match:
        raise InvalidSpec(f"cannot parse prior {text!r}")
    name = _FAMILY_ALIASES.get(match.group(1).lower())
    if name is None:
        raise InvalidSpec(f"unknown prior family {match.group(1)!r}")
    kwargs: dict[str, float] = {}
    if match.group(2) and match.group(2).strip():
        for item in match.group(2).split(","):
            if "=" not in item:
                raise InvalidSpec(f"expected key=value, got {item!r}")
            key, value = item.split("=", 1)
            kwargs[key.strip().lower()] = _number(value)
    return spec_from_dict({"family": name, **kwargs})


def parse_prior_spec(text: str) -> FamilySpec:
    """Parse a compact prior description.

    Examples: ``uniform(N=500)``, ``gaussian(mu=100,sigma=30)``,
    ``exp(rate=0.01)``, ``point(k=5)``,
    ``0.7*gaussian(mu=10,sigma=3)+0.3*gaussian(mu=25,sigma=5)``,
    ``1/3*point(k=8)+1/3*point(k=20)+1/3*point(k=40)``.  A JSON object
    (see :func:`spec_from_dict`) is accepted as well.
    """
    text = text.strip()
    if text.startswith("{"):
        return spec_from_dict(json.loads(text))
    terms = _split_top_level(text, "+")
    if len(terms) == 1 and len(_split_top_level(text, "*")) == 1:
        return _parse_call(text)
    comps = []
    for term in terms:
        pieces = _split_top_level(term, "*")
        if len(pieces) != 2:
            raise InvalidSpec(f"mixture terms look like weight*family(...), got {term!r}")
        comps.append((_number(pieces[0]), _parse_call(pieces[1])))
    # fractional weights such as 1/3 rarely sum to exactly 1 in floating point
    total = math.fsum(w for w, _ in comps)
    if abs(total - 1.0) < 1e-9:
        comps = [(w / total, s) for w, s in comps]
    return Mixture(tuple(comps))


def spec_from_dict(d: dict) -> FamilySpec:
    try:
        return _spec_from_dict(d)
    except KeyError as exc:
        raise InvalidSpec(f"prior spec {d!r} is missing parameter {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidSpec):
            raise
        raise InvalidSpec(f"malformed prior spec {d!r}: {exc}") from None


def _spec_from_dict(d: dict) -> FamilySpec:
    d = {str(k).lower(): v for k, v in d.items()}
    family = _FAMILY_ALIASES.get(str(d.get("family", "")).lower(), d.get("family"))
    n = d.get("n")
    n = None if n is None else int(n)
    if family == "uniform":
        return Uniform(n)
    if family == "geometric":
        return TruncatedGeometric(float(d["p"]), n)
    if family == "exponential":
        return exponential_as_geometric(float(d["rate"]), n)
    if family == "gaussian":
        return TruncatedGaussian(float(d["mu"]), float(d["sigma"]), n)
    if family == "point":
        return PointMass(int(d["k"]))
    if family == "explicit":
        return Explicit(tuple((int(k), float(w)) for k, w in d["points"]))
    if family == "mixture":
        return Mixture(tuple((float(c["weight"]), _spec_from_dict(c["spec"])) for c in d["components"]))
    raise InvalidSpec(f"unknown prior family {d.get('family')!r}")


def spec_to_dict(spec: FamilySpec) -> dict:
    if isinstance(spec, Uniform):
        return {"family": "uniform", "n": spec.n}
    if isinstance(spec, TruncatedGeometric):
        return {"family": "geometric", "p": spec.p, "n": spec.n}
    if isinstance(spec, TruncatedGaussian):
        return {"family": "gaussian", "mu": spec.mu, "sigma": spec.sigma, "n": spec.n}
    if isinstance(spec, PointMass):
        return {"family": "point", "k": spec.k}
    if isinstance(spec, Explicit):
        return {"family": "explicit", "points": [list(p) for p in spec.points]}
    return {"family": "mixture",
            "components": [{"weight": w, "spec": spec_to_dict(s)} for w, s in spec.components]}


_BOUND_DIRECTIVE = re.compile(r"^\s*#\s*horizon_bound\s*=\s*(\d+)\s*$")


def _data_lines(path: Path, directives: dict | None = None):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            match = _BOUND_DIRECTIVE.match(raw)
            if match and directives is not None:
                directives["horizon_bound"] = int(match.group(1))
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, [f.strip() for f in line.split(",")]


def load_prior_file(path, horizon_bound: int | None = None, sparse: bool = False) -> DiscretePrior:
    """Read ``k,weight`` records (``#`` starts a comment) and normalize.

    M defaults to a ``# horizon_bound=M`` comment if present, else the
    largest listed day.
    """
    points = []
    directives: dict = {}
    for lineno, fields in _data_lines(Path(path), directives):
        if len(fields) != 2:
            raise InvalidSpec(f"{path}:{lineno}: expected 'k,weight'")
        try:
            points.append((int(fields[0]), float(fields[1])))
        except ValueError as exc:
            raise InvalidSpec(f"{path}:{lineno}: {exc}") from exc
    if not points:
        raise ZeroMass(f"{path}: no records")
    if horizon_bound is None:
        horizon_bound = directives.get("horizon_bound")
    return DiscretePrior.from_points(points, horizon_bound, sparse=sparse)


def write_prior_file(prior: DiscretePrior, path, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"# horizon_bound={prior.horizon_bound}\n")
        for k, w in prior.points():
            fh.write(f"{k},{w!r}\n")
