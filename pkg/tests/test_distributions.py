import math

import numpy as np
import pytest
from scipy.integrate import quad

from maxineq import (
    FiniteMarginal,
    GaussianMarginal,
    ModelError,
    SymmetrizedPareto,
    TruncationBand,
    centered_bernoulli,
    marginal_from_config,
    two_point,
)
from maxineq.distributions import (
    abs_moment_between,
    g_second_moment,
    shell_abs_mean,
    shell_second_moment,
    signed_shell_second_moments,
)

GAUSS = GaussianMarginal()
PARETO = SymmetrizedPareto(beta=1.4)


def _gauss_density(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def _pareto_abs_density(t):
    # density of |X| for the unit-scale Pareto magnitude
    return PARETO.beta * t ** (-PARETO.beta - 1.0) if t >= 1.0 else 0.0


@pytest.mark.parametrize("b", [0.5, 1.0, 2.0, 3.5])
def test_gaussian_moments_match_quadrature(b):
    ref2, _ = quad(lambda x: x * x * _gauss_density(x), -b, b)
    assert abs(GAUSS.trunc_second_moment(b) - ref2) < 1e-12
    ref1, _ = quad(lambda x: x * _gauss_density(x), b, 40.0)
    assert abs(GAUSS.abs_tail_moment(b) - 2 * ref1) < 1e-12
    assert abs(GAUSS.tail(b) - 2 * quad(_gauss_density, b, 40.0)[0]) < 1e-12


@pytest.mark.parametrize("b", [1.5, 2.0, 5.0])
def test_pareto_moments_match_quadrature(b):
    ref2, _ = quad(lambda t: t * t * _pareto_abs_density(t), 1.0, b)
    assert abs(PARETO.trunc_second_moment(b) - ref2) < 1e-10
    ref1, _ = quad(lambda t: t * _pareto_abs_density(t), b, np.inf)
    assert abs(PARETO.abs_tail_moment(b) - ref1) < 1e-10
    assert PARETO.tail(b) == b**-1.4


def test_pareto_membership():
    assert PARETO.abs_power_moment(1.2) == pytest.approx(1.4 / 0.2)
    assert PARETO.abs_power_moment(1.4) == math.inf
    assert PARETO.abs_power_moment(2.0) == math.inf
    assert SymmetrizedPareto(beta=1.0).abs_tail_moment(2.0) == math.inf


def test_gaussian_abs_power_moment():
    assert GAUSS.abs_power_moment(1.0) == pytest.approx(math.sqrt(2 / math.pi))
    assert GAUSS.abs_power_moment(2.0) == pytest.approx(1.0)


def test_finite_marginal_basics():
    m = two_point(-1, 0.5, 1, 0.5)
    assert m.mean() == 0.0
    assert m.variance() == 1.0
    assert m.tail(0.5) == 1.0
    assert m.tail(1.0) == 0.0
    b = centered_bernoulli(0.25)
    assert b.mean() == pytest.approx(0.0)
    assert b.values == (-0.25, 0.75)


def test_finite_marginal_validation():
    with pytest.raises(ModelError):
        FiniteMarginal(values=(1.0, 1.0), probs=(0.5, 0.5))
    with pytest.raises(ModelError):
        FiniteMarginal(values=(0.0, 1.0), probs=(0.5, 0.6))
    with pytest.raises(ModelError):
        FiniteMarginal(values=(0.0, 1.0), probs=(-0.1, 1.1))


@pytest.mark.parametrize(
    "m", [GAUSS, PARETO, two_point(-1, 0.5, 1, 0.5), two_point(0, 0.75, 2, 0.25)]
)
def test_ppf_inverts_cdf(m):
    for u in [0.01, 0.2, 0.5, 0.8, 0.99]:
        x = float(np.asarray(m.ppf(u)))
        assert m.cdf(x) >= u - 1e-12
        # generalized inverse: nothing smaller reaches u
        assert m.cdf(x - 1e-6 * max(1.0, abs(x))) <= u + 1e-9 or m.cdf(x) == u


@pytest.mark.parametrize("m", [GAUSS, PARETO])
def test_shell_moments_against_quadrature(m):
    band = TruncationBand(1.2, 2.5)
    if isinstance(m, GaussianMarginal):
        density = lambda t: 2 * _gauss_density(t)
    else:
        density = _pareto_abs_density
    h = lambda t: min(max(t - band.inner, 0.0), band.outer - band.inner)
    ref2, _ = quad(lambda t: h(t) ** 2 * density(t), 0.0, np.inf, limit=200)
    ref1, _ = quad(lambda t: h(t) * density(t), 0.0, np.inf, limit=200)
    assert abs(shell_second_moment(m, band) - ref2) < 1e-9
    assert abs(shell_abs_mean(m, band) - ref1) < 1e-9
    pos, neg = signed_shell_second_moments(m, band)
    assert pos == neg
    assert pos + neg == pytest.approx(shell_second_moment(m, band))


def test_shell_moments_finite_enumeration():
    m = FiniteMarginal(values=(-3.0, -1.5, 0.5, 2.0), probs=(0.1, 0.2, 0.4, 0.3))
    band = TruncationBand(1.0, 2.5)
    h = lambda t: min(max(abs(t) - 1.0, 0.0), 1.5)
    expected2 = sum(p * h(v) ** 2 for v, p in zip(m.values, m.probs))
    assert shell_second_moment(m, band) == pytest.approx(expected2, abs=1e-15)
    expected1 = sum(p * h(v) for v, p in zip(m.values, m.probs))
    assert shell_abs_mean(m, band) == pytest.approx(expected1, abs=1e-15)
    g2 = sum(p * min(max(v, -2.0), 2.0) ** 2 for v, p in zip(m.values, m.probs))
    assert g_second_moment(m, 2.0) == pytest.approx(g2, abs=1e-15)
    assert abs_moment_between(m, 1.0, 2.5) == pytest.approx(
        0.2 * 1.5 + 0.3 * 2.0, abs=1e-15
    )


def test_marginal_from_config():
    m = marginal_from_config({"family": "two_point", "values": [-1, 1], "probs": [0.5, 0.5]})
    assert m == two_point(-1, 0.5, 1, 0.5)
    assert isinstance(marginal_from_config({"family": "gaussian"}), GaussianMarginal)
    assert marginal_from_config({"family": "sym_pareto", "exponent": 1.4}) == PARETO
    assert marginal_from_config({"family": "centered_bernoulli", "q": 0.5}).mean() == 0.0
    with pytest.raises(ModelError):
        marginal_from_config({"family": "cauchy"})
    with pytest.raises(ModelError):
        marginal_from_config({"values": [1, 2]})
