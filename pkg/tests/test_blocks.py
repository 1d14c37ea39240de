import pytest

from maxineq import DomainError
from maxineq.blocks import (
    MAX_HORIZON,
    block_partition,
    floor_anchor,
    horizon,
    refinement_anchors,
    sub_block_end,
)


def test_partition_examples():
    assert block_partition(2, 1, 1) == [(1, 2), (3, 4)]
    assert block_partition(2, 1, 2) == [(1, 4)]
    assert block_partition(3, 0, 1) == [(1, 3)]


def test_floor_anchor_examples():
    assert floor_anchor(5, 2, 2) == 4
    assert floor_anchor(4, 2, 2) == 4
    assert floor_anchor(7, 3, 1) == 6


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_partition_tiles_exactly(r, n):
    top = horizon(r, n)
    for k in range(1, n + 2):
        ranges = block_partition(r, n, k)
        assert len(ranges) == r ** (n - k + 1)
        covered = []
        for start, end in ranges:
            assert end - start + 1 == r**k
            covered.extend(range(start, end + 1))
        assert covered == list(range(1, top + 1))


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_floor_sandwich_exhaustive(r, n):
    top = horizon(r, n)
    for m in range(1, top):
        for k in range(1, n + 2):
            anchor = floor_anchor(m, r, k)
            assert anchor <= m < anchor + r**k
            assert anchor % r**k == 0
            assert 0 <= anchor // r**k <= r ** (n - k + 1) - 1


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_refinement_membership_exhaustive(r, n):
    top = horizon(r, n)
    for m in range(1, top):
        for k in range(1, n + 2):
            fine = floor_anchor(m, r, k - 1)
            assert fine in refinement_anchors(m, r, k)


def test_sub_block_ends():
    # block [5, 8] at r=2, k=2 has the single strict sub-block ending at 6
    assert sub_block_end(5, 2, 2, 1) == 6
    assert sub_block_end(1, 3, 1, 2) == 3
    ranges = block_partition(3, 1, 1)
    for start, end in ranges:
        for l in range(1, 3):
            assert start <= sub_block_end(start, 3, 1, l) <= end


def test_domain_errors():
    with pytest.raises(DomainError):
        block_partition(2, 1, 3)
    with pytest.raises(DomainError):
        block_partition(2, 1, 0)
    with pytest.raises(DomainError):
        block_partition(1, 1, 1)
    with pytest.raises(DomainError):
        floor_anchor(0, 2, 1)
    with pytest.raises(DomainError):
        sub_block_end(1, 2, 1, 2)


def test_overflow_cap():
    assert horizon(2, 39) == 2**40 == MAX_HORIZON
    with pytest.raises(DomainError):
        horizon(2, 40)
    with pytest.raises(DomainError):
        block_partition(4, 20, 1)
