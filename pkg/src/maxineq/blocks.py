"""Geometric (radix-r) block index machinery.

The index range ``[1, r**(n+1)]`` is tiled, at each scale ``k`` in
``1..n+1``, by ``r**(n-k+1)`` blocks of width ``r**k``.  Block ``h`` covers
``[1 + h r^k, h r^k + r^k]`` and splits into ``r`` sub-blocks of width
``r^(k-1)``; the sub-block count ``l`` runs over ``1..r-1`` wherever a
strict prefix of a block is needed.

All arithmetic is exact integer arithmetic.  ``r**(n+1)`` is capped at
``2**40``: a silent wraparound would corrupt block sums, so oversized
requests raise instead.
"""

from __future__ import annotations

from .errors import DomainError

MAX_HORIZON = 2**40

__all__ = [
    "MAX_HORIZON",
    "horizon",
    "block_partition",
    "sub_block_end",
    "floor_anchor",
    "refinement_anchors",
]


def _check_r(r: int) -> int:
    if not isinstance(r, (int,)) or isinstance(r, bool) or r <= 1:
        raise DomainError(f"radix must be an integer > 1, got {r!r}")
    return r


def horizon(r: int, n: int) -> int:
    """``r**(n+1)`` with the overflow cap enforced."""
    _check_r(r)
    if n < 0:
        raise DomainError(f"scale horizon needs n >= 0, got {n}")
    value = r ** (n + 1)
    if value > MAX_HORIZON:
        raise DomainError(f"r**(n+1) = {value} exceeds the 2**40 index cap")
    return value


def block_partition(r: int, n: int, k: int) -> list:
    """Inclusive ``(start, end)`` ranges of the scale-``k`` blocks.

    The returned ranges tile ``[1, r**(n+1)]`` exactly.
    """
    top = horizon(r, n)
    if not 1 <= k <= n + 1:
        raise DomainError(f"scale k must lie in 1..{n + 1}, got {k}")
    width = r**k
    return [(1 + h * width, h * width + width) for h in range(top // width)]


def sub_block_end(start: int, r: int, k: int, l: int) -> int:
    """End index of the ``l``-th sub-block of the block starting at ``start``."""
    _check_r(r)
    if not 1 <= l <= r - 1:
        raise DomainError(f"sub-block count must lie in 1..{r - 1}, got {l}")
    return start - 1 + l * r ** (k - 1)


def floor_anchor(m: int, r: int, k: int) -> int:
    """``r^k * floor(m / r^k)``: the left anchor of ``m`` at scale ``k``."""
    _check_r(r)
    if m < 1:
        raise DomainError(f"index must be >= 1, got {m}")
    if k < 0:
        raise DomainError(f"scale must be >= 0, got {k}")
    width = r**k
    return width * (m // width)


def refinement_anchors(m: int, r: int, k: int) -> list:
    """The ``r`` candidate anchors of scale ``k-1`` inside the scale-``k`` block.

    The scale-``(k-1)`` anchor of ``m`` always lands on one of these.
    """
    base = floor_anchor(m, r, k)
    step = r ** (k - 1)
    return [base + l * step for l in range(r)]
