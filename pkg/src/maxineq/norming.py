"""Norming schemes: the triple (b_n, a_{n,k}, c_n).

``b`` scales the partial-sum thresholds, ``a`` splits a threshold across
the block scales ``k = 1..n+1``, and ``c`` weights the series conditions.
The parametric power scheme

    b_n = n**(1/p),   c_n = 1/n,   a_{n,k} = r**(n/alpha + (1/p - 1/alpha) k)

with ``1 <= p < 2``, ``p < alpha < 2`` and integer ``r >= 2`` is the
workhorse; explicit tables are accepted for ad-hoc experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SchemeError

__all__ = ["PowerScheme", "TableScheme", "scheme_from_config", "condition_a_constant"]


def _validate_power_params(p: float, alpha: float, r: int) -> None:
    if not (1.0 <= p < 2.0):
        raise SchemeError(f"p must lie in [1, 2), got {p}")
    if not (p < alpha < 2.0):
        raise SchemeError(f"alpha must lie in ({p}, 2), got {alpha}")
    if not isinstance(r, int) or isinstance(r, bool) or r < 2:
        raise SchemeError(f"r must be an integer >= 2, got {r!r}")


@dataclass(frozen=True)
class PowerScheme:
    p: float
    alpha: float
    r: int

    def __post_init__(self):
        _validate_power_params(self.p, self.alpha, self.r)

    def b(self, n: int) -> float:
        if n < 1:
            raise SchemeError(f"b is defined for n >= 1, got {n}")
        return float(n) ** (1.0 / self.p)

    def a(self, n: int, k: int) -> float:
        if not 1 <= k <= n + 1:
            raise SchemeError(f"a is defined for 1 <= k <= n+1, got n={n}, k={k}")
        expo = n / self.alpha + (1.0 / self.p - 1.0 / self.alpha) * k
        return float(self.r) ** expo

    def c(self, n: int) -> float:
        if n < 1:
            raise SchemeError(f"c is defined for n >= 1, got {n}")
        return 1.0 / float(n)

    def sum_a(self, n: int) -> float:
        return float(sum(self.a(n, k) for k in range(1, n + 2)))

    def sum_a_closed_form(self, n: int) -> float:
        """Geometric-sum value of ``sum_k a_{n,k}`` (equals :meth:`sum_a`)."""
        q = float(self.r) ** (1.0 / self.p - 1.0 / self.alpha)
        return float(self.r) ** (n / self.alpha) * (q ** (n + 2) - q) / (q - 1.0)

    def sum_a_bound_constant(self) -> float:
        """Constant ``c`` with ``sum_k a_{n,k} <= c * r**(n/p)`` for every n."""
        q = float(self.r) ** (1.0 / self.p - 1.0 / self.alpha)
        return float(self.r) ** (2.0 / self.p - 2.0 / self.alpha) / (q - 1.0)

    def describe(self) -> dict:
        return {"kind": "power", "p": self.p, "alpha": self.alpha, "r": self.r}


@dataclass(frozen=True)
class TableScheme:
    """Explicit tables; ``b_table[n]``, ``c_table[n]`` are 1-indexed via n-1."""

    b_table: tuple
    a_table: tuple  # a_table[n-1][k-1] for 1 <= k <= n+1
    c_table: tuple

    def __post_init__(self):
        b = np.asarray(self.b_table, dtype=float)
        c = np.asarray(self.c_table, dtype=float)
        if np.any(b <= 0):
            raise SchemeError("b table must be positive")
        if np.any(np.diff(b) < 0):
            raise SchemeError("b table must be nondecreasing")
        if np.any(c < 0):
            raise SchemeError("c table must be nonnegative")
        if np.any(np.diff(c) > 0):
            raise SchemeError("c table must be nonincreasing")
        for n0, row in enumerate(self.a_table, start=1):
            if len(row) < n0 + 1:
                raise SchemeError(f"a table row for n={n0} needs {n0 + 1} entries")
            if any(v <= 0 for v in row[: n0 + 1]):
                raise SchemeError("a table must be positive")

    def b(self, n: int) -> float:
        if not 1 <= n <= len(self.b_table):
            raise SchemeError(f"b table covers n in 1..{len(self.b_table)}, got {n}")
        return float(self.b_table[n - 1])

    def a(self, n: int, k: int) -> float:
        if not 1 <= n <= len(self.a_table):
            raise SchemeError(f"a table covers n in 1..{len(self.a_table)}, got {n}")
        if not 1 <= k <= n + 1:
            raise SchemeError(f"a is defined for 1 <= k <= n+1, got n={n}, k={k}")
        return float(self.a_table[n - 1][k - 1])

    def c(self, n: int) -> float:
        if not 1 <= n <= len(self.c_table):
            raise SchemeError(f"c table covers n in 1..{len(self.c_table)}, got {n}")
        return float(self.c_table[n - 1])

    def sum_a(self, n: int) -> float:
        return float(sum(self.a(n, k) for k in range(1, n + 2)))

    def describe(self) -> dict:
        return {
            "kind": "tables",
            "b": list(self.b_table),
            "a": [list(row) for row in self.a_table],
            "c": list(self.c_table),
        }


def scheme_from_config(spec: dict):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemeError(f"scheme spec must be an object with a 'kind' key: {spec!r}")
    if spec["kind"] == "power":
        return PowerScheme(p=float(spec["p"]), alpha=float(spec["alpha"]), r=int(spec["r"]))
    if spec["kind"] == "tables":
        return TableScheme(
            b_table=tuple(spec["b"]),
            a_table=tuple(tuple(row) for row in spec["a"]),
            c_table=tuple(spec["c"]),
        )
    raise SchemeError(f"unknown scheme kind {spec['kind']!r}")


def condition_a_constant(scheme, r: int, n_range) -> float:
    """Largest observed ``sum_k a_{n,k} / b(r**n)`` over the working range."""
    ratios = [scheme.sum_a(n) / scheme.b(r**n) for n in n_range]
    if not ratios:
        raise SchemeError("n_range must be nonempty")
    return max(ratios)
