"""Dependence models.

Two substrates:

* :class:`FiniteJointModel` - an exactly enumerable joint law of a finite
  random vector, stored as per-variable supports plus a dense probability
  vector over the outcome lattice in lexicographic order (first variable
  slowest).  This is the ground-truth substrate: every probability and
  moment is an exact finite sum.

* :class:`CopulaSequenceModel` - a samplable dependent sequence built from
  a Gaussian copula over a declared marginal, with a stationary
  correlation-by-lag structure.  Pairwise quadrant dependence is
  sign-controlled by the correlation signs.

Plus :func:`check_domination`, which certifies a uniform tail bound
``P{|X_n| > t} <= C P{|X| > t}`` against an envelope law.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky_banded, toeplitz
from scipy.signal import lfilter
from scipy.special import ndtr

from .distributions import FiniteMarginal, marginal_from_config
from .errors import BudgetError, ModelError
from .rng import make_rng

__all__ = [
    "DEFAULT_ENUM_BUDGET",
    "enum_budget",
    "AbsWindow",
    "FiniteJointModel",
    "IndependentCorrelation",
    "ComonotoneCorrelation",
    "AR1Correlation",
    "BandedCorrelation",
    "correlation_from_config",
    "CopulaSequenceModel",
    "DominationCertificate",
    "check_domination",
    "model_from_config",
]

DEFAULT_ENUM_BUDGET = 10**7


def enum_budget() -> int:
    """Outcome budget; override with the MAXINEQ_ENUM_BUDGET env var."""
    raw = os.environ.get("MAXINEQ_ENUM_BUDGET", "").strip()
    if not raw:
        return DEFAULT_ENUM_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise BudgetError(f"MAXINEQ_ENUM_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise BudgetError(f"MAXINEQ_ENUM_BUDGET must be positive, got {value}")
    return value


@dataclass(frozen=True)
class AbsWindow:
    """Window ``gt < |x| <= le`` on the magnitude of a value."""

    gt: float = -math.inf
    le: float = math.inf

    def contains(self, x) -> np.ndarray:
        a = np.abs(np.asarray(x, dtype=float))
        return (a > self.gt) & (a <= self.le)


class FiniteJointModel:
    """Exactly enumerable joint law over a finite outcome lattice."""

    def __init__(self, supports, probs, *, strict: bool = True, normalize: bool = True):
        supports = tuple(np.asarray(s, dtype=float) for s in supports)
        if len(supports) == 0:
            raise ModelError("model needs at least one variable")
        for j, s in enumerate(supports):
            if s.size == 0:
                raise ModelError(f"variable {j} has empty support")
            if np.any(np.diff(s) <= 0):
                raise ModelError(f"variable {j} support must be strictly increasing")
        sizes = np.array([s.size for s in supports], dtype=np.int64)
        total = int(np.prod(sizes))
        if total > enum_budget():
            raise BudgetError(
                f"outcome count {total} exceeds enumeration budget {enum_budget()}"
            )
        probs = np.asarray(probs, dtype=float).reshape(-1)
        if probs.size != total:
            raise ModelError(f"need {total} probabilities, got {probs.size}")
        if np.any(probs < 0):
            raise ModelError("negative probability in joint pmf")
        s = float(probs.sum())
        if s <= 0:
            raise ModelError("joint pmf sums to zero")
        if strict and abs(s - 1.0) > 1e-9:
            raise ModelError(f"joint pmf sums to {s}, more than 1e-9 away from 1")
        self.supports = supports
        self.probs = probs / s if normalize else probs.copy()
        self.sizes = sizes
        self.strides = np.empty_like(sizes)
        acc = 1
        for v in range(len(supports) - 1, -1, -1):
            self.strides[v] = acc
            acc *= int(sizes[v])
        if abs(self.probs.sum() - 1.0) > 1e-12:
            self.probs /= self.probs.sum()

    # -- construction -------------------------------------------------
    @classmethod
    def from_product(cls, marginals) -> "FiniteJointModel":
        """Independent product of finite marginals."""
        supports = [np.asarray(m.values, dtype=float) for m in marginals]
        probs = np.array([1.0])
        for m in marginals:
            probs = np.outer(probs, np.asarray(m.probs, dtype=float)).reshape(-1)
        return cls(supports, probs)

    @classmethod
    def from_entries(cls, supports, entries, *, strict: bool = True) -> "FiniteJointModel":
        """Build from sparse ``(value-tuple, probability)`` entries."""
        supports = tuple(np.asarray(s, dtype=float) for s in supports)
        sizes = [s.size for s in supports]
        total = int(np.prod(sizes))
        if total > enum_budget():
            raise BudgetError(f"outcome count {total} exceeds enumeration budget")
        probs = np.zeros(total)
        strides = np.empty(len(supports), dtype=np.int64)
        acc = 1
        for v in range(len(supports) - 1, -1, -1):
            strides[v] = acc
            acc *= sizes[v]
        for values, p in entries:
            if len(values) != len(supports):
                raise ModelError(f"entry {values!r} has wrong arity")
            flat = 0
            for v, x in enumerate(values):
                hits = np.nonzero(np.isclose(supports[v], float(x), rtol=0.0, atol=0.0))[0]
                if hits.size != 1:
                    raise ModelError(f"value {x!r} is not an atom of variable {v}")
                flat += int(hits[0]) * int(strides[v])
            probs[flat] += float(p)
        return cls(supports, probs, strict=strict)

    def product(self, other: "FiniteJointModel") -> "FiniteJointModel":
        """Independent concatenation of two models."""
        supports = self.supports + other.supports
        probs = np.outer(self.probs, other.probs).reshape(-1)
        return FiniteJointModel(supports, probs)

    # -- basic views ---------------------------------------------------
    @property
    def length(self) -> int:
        return len(self.supports)

    @property
    def outcome_count(self) -> int:
        return int(self.probs.size)

    def dense(self) -> np.ndarray:
        return self.probs.reshape(tuple(int(s) for s in self.sizes))

    def marginal(self, j: int) -> FiniteMarginal:
        self._check_index(j)
        axes = tuple(v for v in range(self.length) if v != j)
        p = self.dense().sum(axis=axes) if axes else self.probs
        return FiniteMarginal(values=tuple(self.supports[j]), probs=tuple(p))

    def mean(self, j: int) -> float:
        return self.marginal(j).mean()

    def means(self) -> np.ndarray:
        return np.array([self.mean(j) for j in range(self.length)])

    def pair_pmf(self, i: int, j: int) -> np.ndarray:
        """Joint pmf of variables ``(i, j)``; rows index ``i`` atoms."""
        self._check_index(i)
        self._check_index(j)
        if i == j:
            raise ModelError("pair pmf needs two distinct indices")
        axes = tuple(v for v in range(self.length) if v not in (i, j))
        dense = self.dense().sum(axis=axes) if axes else self.dense()
        return dense if i < j else dense.T

    def marginal_abs_moment(self, j: int, power: float, window: AbsWindow) -> float:
        """E |X_j|^power over the magnitude window, by exact enumeration."""
        marg = self.marginal(j)
        values = np.asarray(marg.values)
        probs = np.asarray(marg.probs)
        mask = window.contains(values)
        weights = np.where(values == 0.0, 0.0 if power > 0 else 1.0, np.abs(values) ** power)
        if power == 0.0:
            weights = np.ones_like(values)
        return float(np.sum(probs[mask] * weights[mask]))

    def prefix(self, length: int) -> "FiniteJointModel":
        """Marginal law of the first ``length`` variables."""
        if not 1 <= length <= self.length:
            raise ModelError(f"prefix length must lie in 1..{self.length}, got {length}")
        if length == self.length:
            return self
        axes = tuple(range(length, self.length))
        probs = self.dense().sum(axis=axes).reshape(-1)
        return FiniteJointModel(self.supports[:length], probs)

    def sample_paths(self, n_paths: int, seed: int, stream: int = 0) -> np.ndarray:
        """Sample outcome rows from the joint law (deterministic per seed/stream)."""
        rng = make_rng(seed, stream)
        p = self.probs / self.probs.sum()
        flat = rng.choice(self.outcome_count, size=int(n_paths), p=p)
        out = np.empty((int(n_paths), self.length))
        for v in range(self.length):
            digit = (flat // int(self.strides[v])) % int(self.sizes[v])
            out[:, v] = self.supports[v][digit]
        return out

    def _check_index(self, j: int) -> None:
        if not 0 <= j < self.length:
            raise ModelError(f"variable index {j} out of range 0..{self.length - 1}")


# ---------------------------------------------------------------------------
# Correlation-by-lag structures for the Gaussian copula
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndependentCorrelation:
    def rho(self, lag: int) -> float:
        return 1.0 if lag == 0 else 0.0

    def band(self):
        return 0

    def sample_gaussian(self, length: int, rng) -> np.ndarray:
        return rng.standard_normal(length)


@dataclass(frozen=True)
class ComonotoneCorrelation:
    def rho(self, lag: int) -> float:
        return 1.0

    def band(self):
        return None

    def sample_gaussian(self, length: int, rng) -> np.ndarray:
        return np.full(length, float(rng.standard_normal()))


@dataclass(frozen=True)
class AR1Correlation:
    phi: float

    def __post_init__(self):
        if not (-1.0 < self.phi < 1.0):
            raise ModelError(f"AR(1) coefficient must lie in (-1, 1), got {self.phi}")

    def rho(self, lag: int) -> float:
        return float(self.phi ** abs(lag))

    def band(self):
        return None

    def sample_gaussian(self, length: int, rng) -> np.ndarray:
        w = rng.standard_normal(length)
        x = w.copy()
        if length > 1:
            x[1:] *= math.sqrt(1.0 - self.phi**2)
        return lfilter([1.0], [1.0, -self.phi], x)


@dataclass(frozen=True)
class BandedCorrelation:
    """Nonzero correlation only up to a finite lag."""

    rho_by_lag: tuple  # ((lag, rho), ...) with lags >= 1

    def __post_init__(self):
        pairs = tuple(sorted((int(lag), float(r)) for lag, r in self.rho_by_lag))
        for lag, r in pairs:
            if lag < 1:
                raise ModelError(f"banded lags must be >= 1, got {lag}")
            if not -1.0 < r < 1.0:
                raise ModelError(f"banded correlation at lag {lag} must lie in (-1, 1)")
        object.__setattr__(self, "rho_by_lag", pairs)

    def rho(self, lag: int) -> float:
        lag = abs(lag)
        if lag == 0:
            return 1.0
        for known, r in self.rho_by_lag:
            if known == lag:
                return r
        return 0.0

    def band(self):
        return max((lag for lag, _ in self.rho_by_lag), default=0)

    def sample_gaussian(self, length: int, rng) -> np.ndarray:
        bw = self.band()
        if bw == 0:
            return rng.standard_normal(length)
        bw = min(bw, length - 1)
        ab = np.zeros((bw + 1, length))
        for d in range(bw + 1):
            ab[d, :] = self.rho(d)
        chol = cholesky_banded(ab, lower=True)
        w = rng.standard_normal(length)
        out = np.zeros(length)
        for d in range(bw + 1):
            out[d:] += chol[d, : length - d] * w[: length - d]
        return out


def correlation_from_config(spec: dict):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ModelError(f"correlation spec must be an object with a 'kind' key: {spec!r}")
    kind = spec["kind"]
    if kind == "independent":
        return IndependentCorrelation()
    if kind == "comonotone":
        return ComonotoneCorrelation()
    if kind == "ar1":
        return AR1Correlation(phi=float(spec["phi"]))
    if kind == "banded":
        rho = spec["rho"]
        return BandedCorrelation(rho_by_lag=tuple((int(k), float(v)) for k, v in rho.items()))
    raise ModelError(f"unknown correlation kind {kind!r}")


@dataclass(frozen=True)
class CopulaSequenceModel:
    """Stationary Gaussian-copula sequence with a declared dependence sign."""

    marginal: object
    correlation: object
    sign: str = "independent"
    psd_window: int = 64

    def __post_init__(self):
        if self.sign not in ("pqd", "nqd", "independent"):
            raise ModelError(f"sign must be pqd|nqd|independent, got {self.sign!r}")
        if self.correlation.rho(0) != 1.0:
            raise ModelError("correlation at lag 0 must be 1")
        window = min(self.psd_window, 256)
        lags = np.arange(window)
        row = np.array([self.correlation.rho(int(d)) for d in lags])
        eigs = np.linalg.eigvalsh(toeplitz(row))
        if eigs.min() < -1e-10:
            raise ModelError(
                f"correlation window of size {window} is not positive semidefinite "
                f"(min eigenvalue {eigs.min():.3e})"
            )
        signs = row[1:]
        if self.sign == "pqd" and np.any(signs < 0):
            raise ModelError("declared PQD but some lag correlation is negative")
        if self.sign == "nqd" and np.any(signs > 0):
            raise ModelError("declared NQD but some lag correlation is positive")
        if self.sign == "independent" and np.any(signs != 0):
            raise ModelError("declared independent but some lag correlation is nonzero")

    def rho(self, lag: int) -> float:
        return self.correlation.rho(lag)

    def pair_rho(self, i: int, j: int) -> float:
        return self.correlation.rho(abs(i - j))

    def mean(self, j: int = 0) -> float:
        return self.marginal.mean()

    def sample(self, length: int, seed: int, stream: int = 0) -> np.ndarray:
        """One path of the sequence; deterministic given (seed, stream)."""
        if length < 1:
            raise ModelError(f"length must be >= 1, got {length}")
        rng = make_rng(seed, stream)
        z = self.correlation.sample_gaussian(int(length), rng)
        u = ndtr(z)
        return np.asarray(self.marginal.ppf(u), dtype=float)

    def describe(self) -> dict:
        corr = {"kind": type(self.correlation).__name__}
        return {"marginal": type(self.marginal).__name__, "correlation": corr, "sign": self.sign}


# ---------------------------------------------------------------------------
# Stochastic domination certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominationCertificate:
    constant: float
    feasible: bool
    grid: tuple
    worst_t: float
    envelope: object


def _tail_of(marginal, t: float) -> float:
    return float(marginal.tail(t))


def check_domination(target, envelope, grid=None) -> DominationCertificate:
    """Smallest grid-feasible domination constant for the target's variables.

    For finite-support targets (and finite or strictly-decreasing-tail
    envelopes) the default grid is built from the tail breakpoints, which
    makes the certificate exact: both tails are step functions (or the
    envelope tail is continuous) and every constancy interval contributes
    one evaluation point.
    """
    if isinstance(target, FiniteJointModel):
        marginals = [target.marginal(j) for j in range(target.length)]
    elif isinstance(target, CopulaSequenceModel):
        marginals = [target.marginal]
    else:
        raise ModelError(f"cannot certify domination for {type(target).__name__}")

    if isinstance(target, CopulaSequenceModel) and target.marginal == envelope:
        return DominationCertificate(1.0, True, tuple(grid or ()), 0.0, envelope)

    if grid is None:
        atoms = set()
        for m in marginals:
            if not getattr(m, "is_finite_support", False):
                raise ModelError("a default grid needs finite-support variables")
            atoms.update(abs(v) for v in m.values if abs(v) > 0)
        env_finite = getattr(envelope, "is_finite_support", False)
        if env_finite:
            atoms.update(abs(v) for v in envelope.values if abs(v) > 0)
        points = sorted(atoms)
        if not points:
            return DominationCertificate(1.0, True, (), 0.0, envelope)
        if not env_finite:
            # continuous envelope tail: on each variable-tail constancy
            # interval the ratio supremum sits at the right endpoint, so
            # pair the interval's variable tail with the endpoint's
            # envelope tail
            best = 0.0
            worst_t = points[0]
            reps = [points[0] / 2.0] + points[:-1]
            for rep, endpoint in zip(reps, points):
                var_tail = max(_tail_of(m, rep) for m in marginals)
                env_tail = _tail_of(envelope, endpoint)
                if var_tail == 0.0:
                    continue
                if env_tail == 0.0:
                    return DominationCertificate(
                        math.inf, False, tuple(points), endpoint, envelope
                    )
                if var_tail / env_tail > best:
                    best = var_tail / env_tail
                    worst_t = endpoint
            return DominationCertificate(max(best, 1e-300), True, tuple(points), worst_t, envelope)
        grid = [points[0] / 2.0] + points
    grid = tuple(float(t) for t in grid)
    if len(grid) == 0:
        raise ModelError("domination grid must be nonempty")
    if any(t <= 0 for t in grid):
        raise ModelError("domination grid values must be positive")

    best = 0.0
    worst_t = grid[0]
    feasible = True
    for t in grid:
        env_tail = _tail_of(envelope, t)
        var_tail = max(_tail_of(m, t) for m in marginals)
        if var_tail == 0.0:
            continue
        if env_tail == 0.0:
            return DominationCertificate(math.inf, False, grid, t, envelope)
        ratio = var_tail / env_tail
        if ratio > best:
            best = ratio
            worst_t = t
    if best == 0.0:
        best = 1.0
    return DominationCertificate(best, feasible, grid, worst_t, envelope)


# ---------------------------------------------------------------------------
# JSON construction
# ---------------------------------------------------------------------------


def model_from_config(spec: dict):
    """Build a model from its JSON form (see docs/config_schema.md)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ModelError(f"model spec must be an object with a 'kind' key: {spec!r}")
    kind = spec["kind"]
    if kind == "finite_product":
        marginals = [marginal_from_config(m) for m in spec["marginals"]]
        copies = int(spec.get("copies", 1))
        if copies < 1:
            raise ModelError(f"copies must be >= 1, got {copies}")
        return FiniteJointModel.from_product(marginals * copies)
    if kind == "finite_joint":
        entries = [(tuple(e["values"]), float(e["prob"])) for e in spec["pmf"]]
        return FiniteJointModel.from_entries(
            spec["supports"], entries, strict=bool(spec.get("strict", True))
        )
    if kind == "copula":
        return CopulaSequenceModel(
            marginal=marginal_from_config(spec["marginal"]),
            correlation=correlation_from_config(spec["correlation"]),
            sign=spec.get("sign", "independent"),
            psd_window=int(spec.get("psd_window", 64)),
        )
    raise ModelError(f"unknown model kind {kind!r}")
