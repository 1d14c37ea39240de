"""Marginal / envelope distribution descriptors.

Four families cover the workbench: finite two-point laws, centered
Bernoulli (a two-point special case), the standard Gaussian, and the
symmetrized Pareto with tail exponent ``beta`` (unit scale: ``P{|X| > t} =
t**-beta`` for ``t >= 1``).

Every descriptor exposes the exact building blocks the inequality terms
are assembled from:

* ``tail(t)``                  : P{|X| > t}
* ``trunc_second_moment(b)``   : E X^2 1{|X| <= b}
* ``abs_tail_moment(b)``       : E |X| 1{|X| > b}
* ``abs_power_moment(q)``      : E |X|^q (may be ``inf``)
* ``truncated_mean(level)``    : E of ``t -> clamp(t, level)``
* ``ppf(u)``                   : generalized inverse CDF (drives the
                                 Gaussian-copula sampler)

Annulus quantities (the second moments and means of the shell transforms)
are derived from the blocks in :mod:`maxineq.functionals` helpers below,
so closed forms live here exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import ndtr, ndtri

from .errors import DomainError, ModelError
from .transforms import TruncationBand, shell_magnitude, shell_signed, truncate

__all__ = [
    "FiniteMarginal",
    "two_point",
    "centered_bernoulli",
    "GaussianMarginal",
    "SymmetrizedPareto",
    "marginal_from_config",
    "prob_abs_between",
    "second_moment_between",
    "abs_moment_between",
    "g_second_moment",
    "shell_second_moment",
    "shell_abs_mean",
    "signed_shell_second_moments",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)


def _norm_pdf(x):
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2) / _SQRT2PI


@dataclass(frozen=True)
class FiniteMarginal:
    """Law with finitely many atoms; all functionals are exact sums."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if v.size == 0:
            raise ModelError("finite marginal needs at least one atom")
        if v.size != p.size:
            raise ModelError("values and probs must have equal length")
        if np.any(np.diff(v) <= 0):
            raise ModelError("atom values must be strictly increasing")
        if np.any(p < 0):
            raise ModelError("negative probability in marginal")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ModelError(f"marginal probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "values", tuple(float(x) for x in v))
        object.__setattr__(self, "probs", tuple(float(x) for x in p / p.sum()))

    # -- generic exact expectation ------------------------------------
    def expect(self, fn) -> float:
        return float(sum(p * fn(v) for v, p in zip(self.values, self.probs)))

    def mean(self) -> float:
        return self.expect(lambda v: v)

    def variance(self) -> float:
        m = self.mean()
        return self.expect(lambda v: (v - m) ** 2)

    def tail(self, t: float) -> float:
        return self.expect(lambda v: 1.0 if abs(v) > t else 0.0)

    def trunc_second_moment(self, b: float) -> float:
        return self.expect(lambda v: v * v if abs(v) <= b else 0.0)

    def abs_tail_moment(self, b: float) -> float:
        return self.expect(lambda v: abs(v) if abs(v) > b else 0.0)

    def abs_power_moment(self, q: float) -> float:
        return self.expect(lambda v: abs(v) ** q if v != 0.0 else 0.0)

    def truncated_mean(self, level: float) -> float:
        return self.expect(lambda v: truncate(v, level))

    def ppf(self, u):
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, np.asarray(u, dtype=float), side="left")
        idx = np.clip(idx, 0, len(self.values) - 1)
        return np.asarray(self.values, dtype=float)[idx]

    def cdf(self, x):
        idx = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right")
        cum = np.concatenate([[0.0], np.cumsum(self.probs)])
        out = cum[idx]
        return out if out.ndim else float(out)

    @property
    def is_finite_support(self) -> bool:
        return True

    @property
    def max_abs(self) -> float:
        return max(abs(v) for v in self.values)


def two_point(v1: float, p1: float, v2: float, p2: float) -> FiniteMarginal:
    order = sorted([(v1, p1), (v2, p2)])
    return FiniteMarginal(
        values=(order[0][0], order[1][0]), probs=(order[0][1], order[1][1])
    )


def centered_bernoulli(q: float) -> FiniteMarginal:
    """Law of ``B - q`` for ``B ~ Bernoulli(q)``; mean zero by construction."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"Bernoulli rate must lie in (0, 1), got {q}")
    return FiniteMarginal(values=(-q, 1.0 - q), probs=(1.0 - q, q))


@dataclass(frozen=True)
class GaussianMarginal:
    """Standard normal marginal."""

    def mean(self) -> float:
        return 0.0

    def variance(self) -> float:
        return 1.0

    def tail(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        return float(2.0 * ndtr(-t))

    def trunc_second_moment(self, b: float) -> float:
        if b <= 0.0:
            return 0.0
        return float(math.erf(b / math.sqrt(2.0)) - 2.0 * b * _norm_pdf(b))

    def abs_tail_moment(self, b: float) -> float:
        b = max(b, 0.0)
        return float(2.0 * _norm_pdf(b))

    def abs_power_moment(self, q: float) -> float:
        return float(2.0 ** (q / 2.0) * _gamma((q + 1.0) / 2.0) / math.sqrt(math.pi))

    def truncated_mean(self, level: float) -> float:
        return 0.0

    def ppf(self, u):
        return ndtri(np.asarray(u, dtype=float))

    def cdf(self, x):
        out = ndtr(np.asarray(x, dtype=float))
        return out if out.ndim else float(out)

    @property
    def is_finite_support(self) -> bool:
        return False


@dataclass(frozen=True)
class SymmetrizedPareto:
    """Fair random sign times a unit-scale Pareto magnitude.

    ``P{|X| > t} = min(1, t**-beta)``; lives in L^q exactly for ``q < beta``.
    """

    beta: float

    def __post_init__(self):
        if not (self.beta > 0.0 and np.isfinite(self.beta)):
            raise DomainError(f"tail exponent must be positive, got {self.beta}")

    def mean(self) -> float:
        return 0.0

    def variance(self) -> float:
        return self.abs_power_moment(2.0)

    def tail(self, t: float) -> float:
        if t <= 1.0:
            return 1.0
        return float(t ** (-self.beta))

    def trunc_second_moment(self, b: float) -> float:
        if b <= 1.0:
            return 0.0
        if self.beta == 2.0:
            return float(2.0 * math.log(b))
        return float(self.beta * (b ** (2.0 - self.beta) - 1.0) / (2.0 - self.beta))

    def abs_tail_moment(self, b: float) -> float:
        if self.beta <= 1.0:
            return math.inf
        b = max(b, 1.0)
        return float(self.beta * b ** (1.0 - self.beta) / (self.beta - 1.0))

    def abs_power_moment(self, q: float) -> float:
        if q >= self.beta:
            return math.inf
        return float(self.beta / (self.beta - q))

    def truncated_mean(self, level: float) -> float:
        return 0.0

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        lower = -np.power(2.0 * np.clip(u, 1e-300, None), -1.0 / self.beta)
        upper = np.power(2.0 * np.clip(1.0 - u, 1e-300, None), -1.0 / self.beta)
        out = np.where(u < 0.5, lower, np.where(u > 0.5, upper, -1.0))
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        below = 0.5 * np.power(np.clip(np.abs(x), 1.0, None), -self.beta)
        above = 1.0 - 0.5 * np.power(np.clip(np.abs(x), 1.0, None), -self.beta)
        out = np.where(x <= -1.0, below, np.where(x >= 1.0, above, 0.5))
        return out if out.ndim else float(out)

    @property
    def is_finite_support(self) -> bool:
        return False


def marginal_from_config(spec: dict):
    """Build a descriptor from its JSON form (see docs/config_schema.md)."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise ModelError(f"marginal spec must be an object with a 'family' key: {spec!r}")
    family = spec["family"]
    if family == "two_point":
        vals, probs = spec["values"], spec["probs"]
        if len(vals) != 2 or len(probs) != 2:
            raise ModelError("two_point marginal needs exactly two atoms")
        return two_point(vals[0], probs[0], vals[1], probs[1])
    if family == "finite":
        return FiniteMarginal(values=tuple(spec["values"]), probs=tuple(spec["probs"]))
    if family == "centered_bernoulli":
        return centered_bernoulli(float(spec["q"]))
    if family == "gaussian":
        return GaussianMarginal()
    if family == "sym_pareto":
        return SymmetrizedPareto(beta=float(spec["exponent"]))
    raise ModelError(f"unknown marginal family {family!r}")


# ---------------------------------------------------------------------------
# Derived annulus quantities, valid for every descriptor above
# ---------------------------------------------------------------------------


def prob_abs_between(m, a: float, b: float) -> float:
    """P{a < |X| <= b}."""
    return max(m.tail(a) - m.tail(b), 0.0)


def second_moment_between(m, a: float, b: float) -> float:
    """E X^2 1{a < |X| <= b}."""
    return max(m.trunc_second_moment(b) - m.trunc_second_moment(a), 0.0)


def abs_moment_between(m, a: float, b: float) -> float:
    """E |X| 1{a < |X| <= b}."""
    return max(m.abs_tail_moment(a) - m.abs_tail_moment(b), 0.0)


def g_second_moment(m, level: float) -> float:
    """Second moment of the truncation at ``level``."""
    return m.trunc_second_moment(level) + level**2 * m.tail(level)


def shell_second_moment(m, band: TruncationBand) -> float:
    """Second moment of the shell magnitude over ``band``."""
    lo, hi = band.inner, band.outer
    if getattr(m, "is_finite_support", False):
        return m.expect(lambda v: shell_magnitude(v, band) ** 2)
    inner2 = second_moment_between(m, lo, hi)
    inner1 = abs_moment_between(m, lo, hi)
    inner0 = prob_abs_between(m, lo, hi)
    body = inner2 - 2.0 * lo * inner1 + lo * lo * inner0
    return body + (hi - lo) ** 2 * m.tail(hi)


def shell_abs_mean(m, band: TruncationBand) -> float:
    """Mean of the shell magnitude over ``band``."""
    lo, hi = band.inner, band.outer
    if getattr(m, "is_finite_support", False):
        return m.expect(lambda v: shell_magnitude(v, band))
    inner1 = abs_moment_between(m, lo, hi)
    inner0 = prob_abs_between(m, lo, hi)
    return inner1 - lo * inner0 + (hi - lo) * m.tail(hi)


def signed_shell_second_moments(m, band: TruncationBand) -> tuple:
    """Second moments of the positive and negative parts of the signed shell.

    The signed shell is positive only where the input exceeds ``inner`` and
    negative only below ``-inner``, so for symmetric laws the two halves
    split the shell second moment evenly.
    """
    if getattr(m, "is_finite_support", False):
        pos = m.expect(lambda v: max(shell_signed(v, band), 0.0) ** 2)
        neg = m.expect(lambda v: max(-shell_signed(v, band), 0.0) ** 2)
        return pos, neg
    half = 0.5 * shell_second_moment(m, band)
    return half, half
