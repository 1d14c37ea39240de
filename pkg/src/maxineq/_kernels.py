"""Hot numeric kernels, numba-jitted with a pure-numpy fallback.

The fallback is selected automatically when numba is unavailable, or forced
with the environment variable ``MAXINEQ_NO_NUMBA=1`` (any nonempty value
other than ``0``).  Both implementations are importable side by side so the
test suite can assert parity and ``benchmarks/bench_kernels.py`` can time
them against each other.

Kernel contracts
----------------
``enum_exceedance(values, sizes, strides, probs, means, threshold, horizon)``
    Walk every outcome of a finite joint law laid out lexicographically
    (first variable slowest) and accumulate the probability of the paths
    whose running centered partial sum exceeds ``threshold`` in absolute
    value at some step ``<= horizon``.  Accumulation is compensated
    (Kahan) so that 1e7-outcome sweeps keep near-ulp accuracy.

``max_abs_partial_sums(paths, means)``
    Per-row maximum of |cumulative sum of (path - means)| for a batch of
    sampled paths.
"""

from __future__ import annotations

import os

import numpy as np

_CHUNK = 1 << 15  # fixed fallback chunk so reduction order is reproducible

_disabled = os.environ.get("MAXINEQ_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _disabled:
        raise ImportError("numba disabled via MAXINEQ_NO_NUMBA")
    from numba import njit

    USING_NUMBA = True
except ImportError:
    njit = None
    USING_NUMBA = False


def enum_exceedance_numpy(values, sizes, strides, probs, means, threshold, horizon):
    total = probs.shape[0]
    chunk_sums = []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        running = np.zeros(idx.shape[0])
        max_abs = np.zeros(idx.shape[0])
        for j in range(horizon):
            digit = (idx // strides[j]) % sizes[j]
            running += values[j, digit] - means[j]
            np.maximum(max_abs, np.abs(running), out=max_abs)
        chunk_sums.append(float(np.sum(probs[idx[max_abs > threshold]])))
    # Kahan over the fixed chunk sequence
    acc = 0.0
    comp = 0.0
    for s in chunk_sums:
        y = s - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def max_abs_partial_sums_numpy(paths, means):
    running = np.cumsum(paths - means[np.newaxis, :], axis=1)
    return np.max(np.abs(running), axis=1)


if USING_NUMBA:

    @njit(cache=True)
    def enum_exceedance_numba(values, sizes, strides, probs, means, threshold, horizon):  # pragma: no cover - jitted
        total = probs.shape[0]
        acc = 0.0
        comp = 0.0
        for flat in range(total):
            running = 0.0
            max_abs = 0.0
            for j in range(horizon):
                digit = (flat // strides[j]) % sizes[j]
                running += values[j, digit] - means[j]
                a = abs(running)
                if a > max_abs:
                    max_abs = a
            if max_abs > threshold:
                y = probs[flat] - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
        return acc

    @njit(cache=True)
    def max_abs_partial_sums_numba(paths, means):  # pragma: no cover - jitted
        n_paths = paths.shape[0]
        length = paths.shape[1]
        out = np.empty(n_paths)
        for i in range(n_paths):
            running = 0.0
            max_abs = 0.0
            for j in range(length):
                running += paths[i, j] - means[j]
                a = abs(running)
                if a > max_abs:
                    max_abs = a
            out[i] = max_abs
        return out

    enum_exceedance = enum_exceedance_numba
    max_abs_partial_sums = max_abs_partial_sums_numba
else:
    enum_exceedance_numba = None
    max_abs_partial_sums_numba = None
    enum_exceedance = enum_exceedance_numpy
    max_abs_partial_sums = max_abs_partial_sums_numpy
