"""Brute-force enumeration ground truth.

Every operation here walks the full outcome lattice of a
:class:`~maxineq.models.FiniteJointModel` - deliberately *not* reusing the
marginalization shortcuts of the model itself - so results from this
module can serve as an independent oracle for the rest of the package.

Enumeration order is lexicographic in outcome indices (first variable
slowest) and summation is compensated, so a 1e7-outcome sweep is exact to
a few ulps and bit-reproducible.  Budget violations are hard errors, never
silent truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BudgetError, DomainError
from .models import AbsWindow, FiniteJointModel, enum_budget

__all__ = [
    "EnumerationResult",
    "enumerate_paths",
    "exact_max_partial_sum_tail",
    "exact_pair_covariance",
    "exact_marginal_moment",
]

_CHUNK = 1 << 15


@dataclass(frozen=True)
class EnumerationResult:
    outcome_count: int
    probability: float

    def __post_init__(self):
        if not -1e-12 <= self.probability <= 1.0 + 1e-12:
            raise DomainError(f"probability {self.probability} outside [0, 1]")


def _check_budget(model: FiniteJointModel, budget) -> None:
    cap = enum_budget() if budget is None else int(budget)
    if model.outcome_count > cap:
        raise BudgetError(f"outcome count {model.outcome_count} exceeds budget {cap}")


def enumerate_paths(model: FiniteJointModel, budget=None):
    """Yield every outcome ``(values, probability)`` exactly once."""
    _check_budget(model, budget)
    for flat in range(model.outcome_count):
        values = np.empty(model.length)
        for v in range(model.length):
            digit = (flat // int(model.strides[v])) % int(model.sizes[v])
            values[v] = model.supports[v][digit]
        yield values, float(model.probs[flat])


def _chunked_digits(model: FiniteJointModel, flat: np.ndarray, v: int) -> np.ndarray:
    return (flat // int(model.strides[v])) % int(model.sizes[v])


def exact_max_partial_sum_tail(
    model: FiniteJointModel,
    epsilon: float,
    b_value: float = 1.0,
    horizon=None,
    budget=None,
) -> float:
    """P{ max_{1<=m<=horizon} |sum_{k<=m} (X_k - E X_k)| > epsilon * b_value }.

    Exact by full-lattice enumeration; centering uses the exact marginal
    means.  Variables beyond the horizon are marginalized out first so the
    walk only visits the lattice that matters.
    """
    if epsilon <= 0 or b_value <= 0:
        raise DomainError("epsilon and b_value must be positive")
    horizon = model.length if horizon is None else int(horizon)
    if not 1 <= horizon <= model.length:
        raise DomainError(f"horizon must lie in 1..{model.length}, got {horizon}")
    reduced = model.prefix(horizon)
    _check_budget(reduced, budget)
    max_size = int(reduced.sizes.max())
    values = np.zeros((horizon, max_size))
    for v in range(horizon):
        values[v, : int(reduced.sizes[v])] = reduced.supports[v]
    means = reduced.means()
    threshold = float(epsilon) * float(b_value)
    prob = _kernels.enum_exceedance(
        values,
        reduced.sizes.astype(np.int64),
        reduced.strides.astype(np.int64),
        reduced.probs,
        means,
        threshold,
        horizon,
    )
    return float(min(max(prob, 0.0), 1.0))


def exact_pair_covariance(model: FiniteJointModel, i: int, j: int, transform) -> float:
    """Cov(transform(X_i), transform(X_j)) by full-lattice enumeration."""
    if i == j:
        raise DomainError("pair covariance needs two distinct indices")
    model._check_index(i)
    model._check_index(j)
    _check_budget(model, None)
    fx = np.array([transform(v) for v in model.supports[i]], dtype=float)
    fy = np.array([transform(v) for v in model.supports[j]], dtype=float)
    e_xy = e_x = e_y = 0.0
    for start in range(0, model.outcome_count, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, model.outcome_count), dtype=np.int64)
        p = model.probs[flat]
        a = fx[_chunked_digits(model, flat, i)]
        b = fy[_chunked_digits(model, flat, j)]
        e_xy += float(np.sum(p * a * b))
        e_x += float(np.sum(p * a))
        e_y += float(np.sum(p * b))
    return e_xy - e_x * e_y


def exact_marginal_moment(
    model: FiniteJointModel, j: int, power: float, window: AbsWindow
) -> float:
    """E |X_j|^power over a magnitude window, by full-lattice enumeration."""
    model._check_index(j)
    _check_budget(model, None)
    vals = np.asarray(model.supports[j], dtype=float)
    weights = np.ones_like(vals) if power == 0.0 else np.abs(vals) ** power
    weights = np.where(window.contains(vals), weights, 0.0)
    total = 0.0
    for start in range(0, model.outcome_count, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, model.outcome_count), dtype=np.int64)
        total += float(np.sum(model.probs[flat] * weights[_chunked_digits(model, flat, j)]))
    return total
