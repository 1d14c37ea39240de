import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxineq import (
    DomainError,
    TruncationBand,
    neg_part,
    pos_part,
    shell_magnitude,
    shell_magnitude_clip_form,
    shell_signed,
    truncate,
)

finite_reals = st.floats(min_value=-1e9, max_value=1e9, allow_nan=False)


def test_truncate_examples():
    assert truncate(3.5, 2) == 2
    assert truncate(-3.5, 2) == -2
    assert truncate(1.5, 2) == 1.5


def test_shell_magnitude_examples():
    band = TruncationBand(1, 2)
    assert shell_magnitude(3, band) == 1
    assert shell_magnitude(0.5, band) == 0
    assert shell_magnitude(-1.5, band) == 0.5


def test_shell_signed_examples():
    band = TruncationBand(1, 2)
    assert shell_signed(3, band) == 1
    assert shell_signed(-3, band) == -1
    assert shell_signed(1, band) == 0


def test_parts_examples():
    assert pos_part(-2) == 0
    assert neg_part(-2) == 2
    assert pos_part(0) == 0


def test_domain_errors():
    with pytest.raises(DomainError):
        truncate(float("nan"), 1.0)
    with pytest.raises(DomainError):
        truncate(1.0, 0.0)
    with pytest.raises(DomainError):
        truncate(1.0, -2.0)
    with pytest.raises(DomainError):
        TruncationBand(2, 1)
    with pytest.raises(DomainError):
        TruncationBand(0, 1)
    with pytest.raises(DomainError):
        pos_part(float("inf"))


@given(t=finite_reals, s=finite_reals, level=st.floats(min_value=1e-6, max_value=1e6))
def test_truncate_lipschitz_odd_bounded(t, s, level):
    gt, gs = truncate(t, level), truncate(s, level)
    assert abs(gt - gs) <= abs(t - s) + 1e-9 * max(1.0, abs(t - s))
    assert truncate(-t, level) == -gt
    assert abs(gt) <= level
    if s <= t:
        assert gs <= gt


@given(
    t=finite_reals,
    inner=st.floats(min_value=1e-6, max_value=1e6),
    width=st.floats(min_value=0, max_value=1e6),
)
def test_shell_closed_forms_agree_exactly(t, inner, width):
    band = TruncationBand(inner, inner + width)
    assert shell_magnitude(t, band) == shell_magnitude_clip_form(t, band)


@given(
    t=finite_reals,
    inner=st.floats(min_value=1e-6, max_value=1e6),
    width=st.floats(min_value=0, max_value=1e6),
)
def test_shell_identities(t, inner, width):
    band = TruncationBand(inner, inner + width)
    f = shell_signed(t, band)
    h = shell_magnitude(t, band)
    assert h == abs(f)
    assert h == pos_part(f) + neg_part(f)
    assert shell_magnitude(-t, band) == h
    assert 0 <= h <= width


@given(t=finite_reals, level=st.floats(min_value=1e-6, max_value=1e6))
def test_degenerate_band_vanishes(t, level):
    band = TruncationBand(level, level)
    assert shell_magnitude(t, band) == 0.0
    assert shell_signed(t, band) == 0.0


@given(t=finite_reals)
def test_parts_decomposition(t):
    assert pos_part(t) - neg_part(t) == t
    assert pos_part(t) + neg_part(t) == abs(t)
    assert pos_part(t) >= 0 and neg_part(t) >= 0


def test_array_inputs():
    band = TruncationBand(1, 2)
    x = np.array([-3.0, -1.5, 0.0, 1.5, 3.0])
    np.testing.assert_array_equal(truncate(x, 2), [-2, -1.5, 0, 1.5, 2])
    np.testing.assert_array_equal(shell_magnitude(x, band), [1, 0.5, 0, 0.5, 1])
    np.testing.assert_array_equal(
        shell_magnitude(x, band), shell_magnitude_clip_form(x, band)
    )
