"""Synthetic three-cell data under integrity and under error copying.

The copying mechanism models one concrete way to fake correlated cells:
with shared standard normal draws U_j and private draws V_ij, the error of
cell i in column j is

    eps_ij = sigma_i * (Delta_ij * U_j + (1 - Delta_ij) * V_ij)

where the Delta_ij are independent Bernoulli indicators with

    P(Delta_1j = 1) = sqrt(rho2*rho3 / rho1)
    P(Delta_2j = 1) = sqrt(rho1*rho3 / rho2)
    P(Delta_3j = 1) = sqrt(rho1*rho2 / rho3)

Whenever two cells both copy a column (both Deltas are 1), their
standardized errors coincide exactly; the construction realizes pairwise
correlations (rho3, rho2, rho1) between cells (1,2), (1,3) and (2,3).
The probabilities only exist when all rho_i are positive and each pairwise
product is dominated by the third coordinate; the independence null
(rho = 0) is the Delta == 0 special case.

All randomness is drawn from numpy Generators seeded per replication with
(seed, replication index), so Monte Carlo results are reproducible
bit-for-bit regardless of how replications are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import Mode, evidential_value
from .geometry import CorrelationTriple
from .ledger import StudySummary

__all__ = [
    "ModelParams",
    "ParameterError",
    "SimulationReport",
    "copy_probabilities",
    "generate_errors",
    "null_exceedance",
    "simulate_study",
]


class ParameterError(ValueError):
    """Invalid simulation parameters."""


@dataclass(frozen=True)
class ModelParams:
    """Ground-truth parameters of one simulated study."""

    mu: tuple[float, float, float]
    sigma: tuple[float, float, float]
    rho: CorrelationTriple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "sigma", tuple(float(s) for s in self.sigma))
        if not isinstance(self.rho, CorrelationTriple):
            object.__setattr__(self, "rho", CorrelationTriple(*self.rho))
        if len(self.mu) != 3 or len(self.sigma) != 3:
            raise ParameterError("mu and sigma must have exactly three entries")
        if any(s <= 0 for s in self.sigma):
            raise ParameterError("sigma must be positive")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))


def copy_probabilities(rho) -> tuple[float, float, float]:
    """Per-cell Bernoulli copy probabilities for the target correlations.

    Returns (0, 0, 0) for the independence null.  Raises
    :class:`ParameterError` naming the violated product condition when a
    probability would fall outside [0, 1].
    """
    r1, r2, r3 = rho
    if r1 == 0.0 and r2 == 0.0 and r3 == 0.0:
        return (0.0, 0.0, 0.0)
    if not (r1 > 0 and r2 > 0 and r3 > 0):
        raise ParameterError(
            "the copying mechanism needs all rho_i > 0 (or all zero for the null), "
            f"got {tuple(rho)}"
        )
    conditions = (
        (r2 * r3, r1, "rho2*rho3 <= rho1"),
        (r1 * r3, r2, "rho1*rho3 <= rho2"),
        (r1 * r2, r3, "rho1*rho2 <= rho3"),
    )
    for product, bound, label in conditions:
        if product > bound:
            raise ParameterError(
                f"copy probability would exceed 1: condition {label} is violated "
                f"({product:.6g} > {bound:.6g})"
            )
    return (
        math.sqrt(r2 * r3 / r1),
        math.sqrt(r1 * r3 / r2),
        math.sqrt(r1 * r2 / r3),
    )


def generate_errors(params: ModelParams, seed) -> np.ndarray:
    """Draw the 3 x n error matrix for one study.

    Deterministic given *seed* (anything acceptable to
    :func:`numpy.random.default_rng`).  Draw order is fixed: shared column
    draws U, private draws V, then the copy indicators.
    """
    probs = copy_probabilities(params.rho)
    rng = np.random.default_rng(seed)
    n = params.n
    u = rng.standard_normal(n)
    v = rng.standard_normal((3, n))
    if probs == (0.0, 0.0, 0.0):
        standardized = v
    else:
        delta = rng.random((3, n)) < np.asarray(probs)[:, None]
        standardized = np.where(delta, u[None, :], v)
    return np.asarray(params.sigma)[:, None] * standardized


def simulate_study(params: ModelParams, seed, label: str = "sim") -> StudySummary:
    """Simulate one study and summarize it like a publication would."""
    if params.n < 2:
        raise ParameterError("n >= 2 required for sample sd")
    eps = generate_errors(params, seed)
    data = np.asarray(params.mu)[:, None] + eps
    means = data.mean(axis=1)
    sds = data.std(axis=1, ddof=1)
    return StudySummary(
        id=label,
        n=float(params.n),
        means=tuple(means.tolist()),
        sds=tuple(sds.tolist()),
    )


@dataclass(frozen=True)
class SimulationReport:
    """Monte Carlo estimate of a null exceedance probability."""

    reps: int
    seed: int
    v_threshold: float
    exceed_prob: float
    mc_stderr: float


def null_exceedance(n, sigma, v_threshold, reps, seed) -> SimulationReport:
    """Estimate P(V >= v) under data integrity by Monte Carlo.

    Draws *reps* independent studies with independent errors and means on
    the linear constraint (mu = 0 without loss of generality: V depends on
    the means only through the contrast), evaluates the paper-mode
    evidential value of each, and counts a study as exceeding when its
    lower bound reaches *v_threshold* (the conservative reading of an
    interval).  Replication k uses the random stream (seed, k), so the
    estimate is independent of scheduling and reproducible bit-for-bit.
    """
    if reps < 1000:
        raise ParameterError("reps must be at least 1000")
    if not v_threshold > 1.0:
        raise ParameterError("v_threshold must exceed 1")
    params = ModelParams(
        mu=(0.0, 0.0, 0.0),
        sigma=tuple(sigma),
        rho=CorrelationTriple(0.0, 0.0, 0.0),
        n=int(n),
    )
    if params.n < 2:
        raise ParameterError("n >= 2 required for sample sd")
    seed = int(seed)
    count = 0
    for rep in range(reps):
        study = simulate_study(params, (seed, rep))
        ev = evidential_value(study, Mode.PAPER)
        if ev.lower >= v_threshold:
            count += 1
    p = count / reps
    return SimulationReport(
        reps=reps,
        seed=seed,
        v_threshold=float(v_threshold),
        exceed_prob=p,
        mc_stderr=math.sqrt(p * (1.0 - p) / reps),
    )
