"""Evidential value of a study and related diagnostics.

The evidential value V of one study is the likelihood ratio of the
observed mean contrast ``z = x1 - 2*x2 + x3`` under the fabrication
hypothesis (correlated errors, variance at most the independence
variance) versus the integrity hypothesis (independent errors), with the
cell standard deviations plugged in as known scales:

    V = sup_{admissible rho, s(rho) <= s0} f_n(z; s(rho)) / f_n(z; s0)

where ``f_n(z; s)`` is the N(0, s^2/n) density and ``s0^2 = s1^2 + 4*s2^2
+ s3^2``.  Because the achievable variances form the interval
[s_L^2, s0^2], the supremum has three regimes, keyed on where ``n*z^2``
falls relative to that interval:

* ``above``  (n z^2 >= s0^2): V = 1, the data are at least as dispersed
  as independence predicts; nothing to explain.
* ``middle`` (lower bound <= n z^2 <= s0^2): the supremum is attained at
  variance n z^2, giving the closed form
  ``V = sqrt(s0^2 / (n z^2)) * exp(-(1 - n z^2 / s0^2) / 2)``.
* ``below``  (n z^2 < lower bound): the density is decreasing in the
  variance on the achievable interval, so the supremum sits at the
  variance floor.

In ``paper`` mode the floor is the computable proxy
:func:`~evidential.geometry.paper_lower_bound_sq`, which is only an upper
bound for the true floor, so the below-regime yields an interval
[value at proxy floor, unconstrained maximum].  In ``exact`` mode the
floor is the numeric infimum and the below-regime collapses to a point.
V is never below 1: this screen produces no exculpatory evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

from scipy.optimize import bisect

from .geometry import contrast, paper_lower_bound_sq, variance_profile

__all__ = [
    "Case",
    "CombinedEvidence",
    "EvidentialValue",
    "Mode",
    "combine",
    "empirical_tail_fraction",
    "evidential_value",
    "null_tail_probability",
    "plugin_density",
    "threshold_ratio",
    "z_c_statistic",
    "z_v_statistic",
]

_SQRT2 = math.sqrt(2.0)


class Mode(str, Enum):
    """Which variance floor the evidential value is computed against."""

    PAPER = "paper"
    EXACT = "exact"


class Case(str, Enum):
    """Regime of n*z^2 relative to [variance floor, s0^2]."""

    MIDDLE = "middle"
    BELOW = "below"
    ABOVE = "above"


@dataclass(frozen=True)
class EvidentialValue:
    """A point value (lower == upper) or interval for V.

    ``math.inf`` is the distinguished unbounded upper end; it is produced
    deliberately (zero contrast with a vanishing variance floor), never as
    an overflow artifact.
    """

    lower: float
    upper: float
    case: Case
    mode: Mode

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.upper)


def plugin_density(z: float, n: float, s_sq: float) -> float:
    """Density of N(0, s_sq / n) at *z*: the plug-in law of the contrast."""
    if n <= 0:
        raise ValueError("n must be positive")
    if s_sq <= 0:
        raise ValueError("s_sq must be positive")
    return math.sqrt(n / (2.0 * math.pi * s_sq)) * math.exp(-n * z * z / (2.0 * s_sq))


def _point_value(nz_sq: float, s0_sq: float) -> float:
    # supremum attained at variance nz_sq (requires 0 < nz_sq <= s0_sq)
    return math.sqrt(s0_sq / nz_sq) * math.exp(-0.5 * (1.0 - nz_sq / s0_sq))


def _floor_value(nz_sq: float, floor_sq: float, s0_sq: float) -> float:
    # density ratio at the variance floor (requires floor_sq > 0)
    return math.sqrt(s0_sq / floor_sq) * math.exp(
        -0.5 * nz_sq * (1.0 / floor_sq - 1.0 / s0_sq)
    )


def evidential_value(study, mode: Union[Mode, str] = Mode.PAPER) -> EvidentialValue:
    """Evidential value of one study in favor of fabrication.

    ``paper`` mode reproduces the published bounds; ``exact`` mode uses the
    numerically computed variance infimum and always returns a point value
    (possibly the distinguished unbounded one).
    """
    mode = Mode(mode)
    from .ledger import LedgerError, validate

    problems = validate(study)
    if problems:
        raise LedgerError(
            f"study '{study.id}': " + "; ".join(problems), study_id=study.id
        )
    if mode is Mode.EXACT:
        profile = variance_profile(study)
        s0_sq = profile.s0_sq
        floor_sq = profile.exact_lower_sq
        nz_sq = profile.nz_sq
    else:
        s1, s2, s3 = study.sds
        s0_sq = s1 * s1 + 4.0 * s2 * s2 + s3 * s3
        floor_sq = paper_lower_bound_sq(study.sds)
        z = contrast(study.means)
        nz_sq = study.n * z * z

    if nz_sq > s0_sq:
        return EvidentialValue(1.0, 1.0, Case.ABOVE, mode)
    if nz_sq < floor_sq or (nz_sq == 0.0 and floor_sq == 0.0):
        if floor_sq == 0.0:
            # only reachable with nz_sq == 0: density ratio grows without
            # bound as the variance drops to zero at a zero contrast
            lower = math.inf
        else:
            lower = max(1.0, _floor_value(nz_sq, floor_sq, s0_sq))
        if mode is Mode.EXACT:
            return EvidentialValue(lower, lower, Case.BELOW, mode)
        upper = math.inf if nz_sq == 0.0 else max(lower, _point_value(nz_sq, s0_sq))
        return EvidentialValue(lower, upper, Case.BELOW, mode)
    value = max(1.0, _point_value(nz_sq, s0_sq))
    return EvidentialValue(value, value, Case.MIDDLE, mode)


def z_v_statistic(study) -> float:
    """Standardized contrast sqrt(n)*z / sqrt(s1^2 + 4*s2^2 + s3^2).

    Approximately standard normal when the cell means follow the linear
    constraint; values near zero are what inflate the evidential value.
    """
    s1, s2, s3 = study.sds
    s0 = math.sqrt(s1 * s1 + 4.0 * s2 * s2 + s3 * s3)
    return math.sqrt(study.n) * contrast(study.means) / s0


def z_c_statistic(study) -> float:
    """Standardized contrast with pooled denominator sqrt(2*(s1^2+s2^2+s3^2))."""
    s1, s2, s3 = study.sds
    denom = math.sqrt(2.0 * (s1 * s1 + s2 * s2 + s3 * s3))
    return math.sqrt(study.n) * contrast(study.means) / denom


def threshold_ratio(v: float) -> float:
    """Invert the middle-regime value: largest |Z_V| still giving V >= v.

    Solves ``t^(-1/2) * exp((t - 1)/2) = v`` for ``t = n*z^2/s0^2`` in
    (0, 1] by bisection (the left side falls from +inf to 1 there) and
    returns sqrt(t); then ``V >= v`` iff ``|Z_V| <= threshold_ratio(v)``.
    """
    if not v > 1.0:
        raise ValueError("v must exceed 1")
    log_v = math.log(v)

    def f(t):
        return -0.5 * math.log(t) + 0.5 * (t - 1.0) - log_v

    lo = 0.5
    while f(lo) <= 0.0:
        lo *= 0.5
    t = bisect(f, lo, 1.0, xtol=1e-15, rtol=1e-13)
    return math.sqrt(t)


def null_tail_probability(v: float) -> float:
    """P(V >= v) under data integrity, treating Z_V as standard normal."""
    r = threshold_ratio(v)
    return math.erf(r / _SQRT2)


def empirical_tail_fraction(values: Sequence[EvidentialValue], v: float) -> float:
    """Observed fraction of studies with V >= v (by their lower bounds).

    The empirical counterpart of :func:`null_tail_probability`, useful when
    a corpus of comparable studies serves as the reference population.
    """
    if not values:
        raise ValueError("no studies")
    return sum(1 for ev in values if ev.lower >= v) / len(values)


@dataclass(frozen=True)
class CombinedEvidence:
    """Product of per-study evidential values and the resulting odds."""

    per_study: tuple[tuple[str, EvidentialValue], ...]
    product_lower: float
    product_upper: float
    prior_odds: float
    posterior_odds_lower: float
    posterior_odds_upper: float


def combine(values, prior_odds: float = 1.0) -> CombinedEvidence:
    """Multiply evidential values of independent studies into overall odds.

    *values* may contain ``EvidentialValue`` items or ``(id, value)``
    pairs.  Interval-valued entries are combined by interval arithmetic;
    an unbounded upper end is absorbing.  Posterior odds are
    ``prior_odds * product`` on both ends.
    """
    if not values:
        raise ValueError("no studies")
    if not prior_odds > 0:
        raise ValueError("prior_odds must be positive")
    labeled = []
    for k, item in enumerate(values):
        if isinstance(item, EvidentialValue):
            labeled.append((str(k + 1), item))
        else:
            name, ev = item
            labeled.append((str(name), ev))
    product_lower = 1.0
    product_upper = 1.0
    for _, ev in labeled:
        product_lower *= ev.lower
        product_upper *= ev.upper
    return CombinedEvidence(
        per_study=tuple(labeled),
        product_lower=product_lower,
        product_upper=product_upper,
        prior_odds=prior_odds,
        posterior_odds_lower=prior_odds * product_lower,
        posterior_odds_upper=prior_odds * product_upper,
    )
