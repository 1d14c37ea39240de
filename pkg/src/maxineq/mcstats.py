"""Exact binomial intervals and Monte Carlo vs. oracle calibration."""

from __future__ import annotations

from dataclasses import dataclass

from scipy.special import betaincinv

from .errors import DomainError

__all__ = ["clopper_pearson", "CalibrationReport", "mc_calibration"]


def clopper_pearson(successes: int, trials: int, alpha: float = 0.01):
    """Exact (conservative) two-sided binomial confidence interval."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if not 0 <= successes <= trials:
        raise DomainError(f"successes must lie in 0..{trials}, got {successes}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    x, n = int(successes), int(trials)
    lower = 0.0 if x == 0 else float(betaincinv(x, n - x + 1, alpha / 2.0))
    upper = 1.0 if x == n else float(betaincinv(x + 1, n - x, 1.0 - alpha / 2.0))
    return lower, upper


@dataclass(frozen=True)
class CalibrationReport:
    """Coverage of seeded MC intervals against an exact probability."""

    exact: float
    replications: int
    covered: int
    alpha: float
    seeds: tuple

    @property
    def coverage(self) -> float:
        return self.covered / self.replications

    def to_dict(self) -> dict:
        return {
            "exact_probability": self.exact,
            "replications": self.replications,
            "covered": self.covered,
            "coverage": self.coverage,
            "alpha": self.alpha,
        }


def mc_calibration(exact: float, run_mc, seeds, alpha: float = 0.01) -> CalibrationReport:
    """Run ``run_mc(seed)`` per seed and count intervals covering ``exact``.

    ``run_mc`` must return an object with ``lower``/``upper`` attributes
    (a :class:`~maxineq.max_inequality.MCExceedance` fits).
    """
    covered = 0
    for seed in seeds:
        est = run_mc(int(seed))
        if est.lower - 1e-15 <= exact <= est.upper + 1e-15:
            covered += 1
    return CalibrationReport(
        exact=exact,
        replications=len(seeds),
        covered=covered,
        alpha=alpha,
        seeds=tuple(int(s) for s in seeds),
    )
