"""Pure scalar truncation transforms.

Everything here is a total, exact piecewise-linear map: no tolerances, no
epsilon fuzzing at the breakpoints.  All functions accept scalars or numpy
arrays and preserve the input shape.

* ``truncate(t, level)`` clamps ``t`` to ``[-level, level]``.
* ``shell_signed(t, band)`` is ``truncate(t, outer) - truncate(t, inner)``:
  the signed amount of ``t`` captured between the two truncation levels.
* ``shell_magnitude(t, band)`` is its absolute value; it only sees the mass
  of ``t`` in the annulus ``inner < |t| <= outer``.
* ``shell_magnitude_clip_form`` evaluates the same function through an
  independent lattice (min/max) expression and exists purely as a
  cross-validation route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TruncationBand",
    "truncate",
    "shell_signed",
    "shell_magnitude",
    "shell_magnitude_clip_form",
    "pos_part",
    "neg_part",
]


@dataclass(frozen=True)
class TruncationBand:
    """A pair of truncation levels with ``0 < inner <= outer``."""

    inner: float
    outer: float

    def __post_init__(self):
        if not (np.isfinite(self.inner) and np.isfinite(self.outer)):
            raise DomainError("truncation levels must be finite")
        if not (0.0 < self.inner <= self.outer):
            raise DomainError(
                f"need 0 < inner <= outer, got inner={self.inner}, outer={self.outer}"
            )


def _check_finite(t):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("input must be finite")
    return arr


def truncate(t, level):
    """Clamp ``t`` into ``[-level, level]``; requires ``level > 0``."""
    if not np.isfinite(level) or level <= 0.0:
        raise DomainError(f"truncation level must be a positive finite real, got {level}")
    arr = _check_finite(t)
    out = np.minimum(np.maximum(arr, -level), level)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def shell_signed(t, band: TruncationBand):
    """Signed annulus content: truncation at ``outer`` minus truncation at ``inner``."""
    return truncate(t, band.outer) - truncate(t, band.inner)


def shell_magnitude(t, band: TruncationBand):
    """Absolute annulus content ``|truncate(t, outer) - truncate(t, inner)|``."""
    return np.abs(shell_signed(t, band))


def shell_magnitude_clip_form(t, band: TruncationBand):
    """Independent min/max evaluation of :func:`shell_magnitude`.

    Computes ``0 v [(outer-inner) ^ (t-inner)] - 0 ^ [(inner-outer) v (t+inner)]``
    where ``v``/``^`` are max/min.  Must agree with :func:`shell_magnitude`
    exactly at every finite input; the test suite enforces this.
    """
    arr = _check_finite(t)
    lo, hi = band.inner, band.outer
    width = hi - lo
    upper = np.maximum(0.0, np.minimum(width, arr - lo))
    lower = np.minimum(0.0, np.maximum(-width, arr + lo))
    out = upper - lower
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def pos_part(t):
    """``0 v t``."""
    arr = _check_finite(t)
    out = np.maximum(arr, 0.0)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out


def neg_part(t):
    """``0 v (-t)``."""
    arr = _check_finite(t)
    out = np.maximum(-arr, 0.0)
    return float(out) if np.isscalar(t) or arr.ndim == 0 else out
