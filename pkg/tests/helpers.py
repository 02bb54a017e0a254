"""Shared test utilities: independent oracles and random-input factories.

The brute-force minimizer here deliberately shares no code with the
production solver; it is the reference the solver is judged against.
"""

import math

import numpy as np

from evidential.ledger import StudySummary


def brute_force_infimum_sq(sds, coarse_step=0.002, zoom_rounds=4):
    """Independent oracle for the constrained variance infimum.

    Exhaustive scan of the boundary surface of the correlation body using
    its planar-angle form rho = (cos u, cos w, cos(u - w)), followed by
    grid zooming around the best cell.  Slow and dumb on purpose.
    """
    s1, s2, s3 = sds
    s0_sq = s1 * s1 + 4.0 * s2 * s2 + s3 * s3
    c1, c2, c3 = -4.0 * s2 * s3, 2.0 * s1 * s3, -4.0 * s1 * s2

    w = np.arange(-math.pi, math.pi + coarse_step / 2, coarse_step)
    cos_w, sin_w = np.cos(w), np.sin(w)
    best_val, best_u, best_w = math.inf, 0.0, 0.0
    for u in np.arange(0.0, math.pi + coarse_step / 2, coarse_step):
        vals = c1 * math.cos(u) + c2 * cos_w + c3 * (
            math.cos(u) * cos_w + math.sin(u) * sin_w
        )
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val, best_u, best_w = float(vals[j]), float(u), float(w[j])

    span = coarse_step
    for _ in range(zoom_rounds):
        us = np.linspace(best_u - span, best_u + span, 81)
        ws = np.linspace(best_w - span, best_w + span, 81)
        grid = (
            c1 * np.cos(us)[:, None]
            + c2 * np.cos(ws)[None, :]
            + c3 * np.cos(us[:, None] - ws[None, :])
        )
        k = int(np.argmin(grid))
        i, j = divmod(k, grid.shape[1])
        best_val, best_u, best_w = float(grid[i, j]), float(us[i]), float(ws[j])
        span /= 20.0
    return max(0.0, s0_sq + best_val)


def random_sds(rng, low=0.1, high=10.0):
    return tuple(rng.uniform(low, high, 3).tolist())


def random_study(rng, ident="r"):
    """A random valid study: means anywhere, positive sds, real n."""
    return StudySummary(
        id=ident,
        n=float(rng.uniform(2.0, 120.0)),
        means=tuple(rng.uniform(-5.0, 5.0, 3).tolist()),
        sds=random_sds(rng),
    )


def random_interior_rho(rng):
    """Rejection-sample a strictly interior correlation triple."""
    while True:
        r = rng.uniform(-1.0, 1.0, 3)
        r1, r2, r3 = r
        det = 1.0 - r1 * r1 - r2 * r2 - r3 * r3 + 2.0 * r1 * r2 * r3
        if det > 1e-9 and np.all(np.abs(r) < 1.0 - 1e-9):
            return tuple(r.tolist())
