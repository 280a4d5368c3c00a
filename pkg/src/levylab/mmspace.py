"""Finite metric-measure spaces with exact concentration machinery.

A space is a finite point set with a metric given as a distance matrix and
a probability vector.  Everything here is exact (up to float arithmetic):
the concentration function enumerates all subsets, medians follow the
smallest-valid-median convention, and deviation masses use the strict
inequality |f - c| > eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidFunctionTable,
    InvalidSpace,
    LengthMismatch,
    NegativeEps,
    NonPositiveEps,
    SpaceTooLarge,
)

DEFAULT_ENUMERATION_LIMIT = 20

_MASS_TOL = 1e-12
_DIST_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteMMSpace:
    """A finite metric space carrying a probability measure.

    The distance matrix must be symmetric with zero diagonal and satisfy
    the triangle inequality; the measure must be a probability vector.
    Both are checked on construction.  Instances are immutable values and
    all operations on them are pure, so they are safe to share between
    threads.
    """

    points: tuple
    dist: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        pts = tuple(self.points)
        dist = np.asarray(self.dist, dtype=np.float64)
        mu = np.asarray(self.mu, dtype=np.float64)
        n = len(pts)
        if dist.shape != (n, n):
            raise InvalidSpace(f"distance matrix shape {dist.shape} does not match {n} points")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0):
            raise InvalidSpace("distances must be finite and non-negative")
        if np.any(np.abs(np.diag(dist)) > _DIST_TOL):
            raise InvalidSpace("distance matrix must have zero diagonal")
        if np.any(np.abs(dist - dist.T) > _DIST_TOL):
            raise InvalidSpace("distance matrix must be symmetric")
        if np.any(dist[:, :, None] > dist[:, None, :] + dist[None, :, :] + 1e-9):
            raise InvalidSpace("triangle inequality violated")
        if mu.shape != (n,):
            raise InvalidSpace(f"measure length {mu.shape} does not match {n} points")
        if np.any(mu < -_MASS_TOL) or abs(mu.sum() - 1.0) > _MASS_TOL:
            raise InvalidSpace("measure must be a probability vector")
        dist.flags.writeable = False
        mu.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "mu", mu)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    @classmethod
    def uniform(cls, points, dist) -> "FiniteMMSpace":
        n = len(points)
        return cls(tuple(points), dist, np.full(n, 1.0 / n))


def as_function_table(space: FiniteMMSpace, f) -> np.ndarray:
    """Coerce f to one finite real value per point of the space."""
    values = np.asarray(f, dtype=np.float64)
    if values.shape != (len(space),):
        raise LengthMismatch(f"expected {len(space)} values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise InvalidFunctionTable("function table contains non-finite values")
    return values


def alpha_profile(space: FiniteMMSpace, eps_values, *, limit: int = DEFAULT_ENUMERATION_LIMIT) -> np.ndarray:
    """Concentration function evaluated on a grid of radii.

    For eps > 0 this is 1 minus the infimum, over subsets A with
    mu(A) >= 1/2, of the mass of the closed eps-neighborhood of A; the
    value at eps = 0 is 1/2 by convention.  The subset enumeration is
    shared across all radii, which is what makes grid sweeps affordable.
    """
    eps_values = np.asarray(eps_values, dtype=np.float64)
    if np.any(eps_values < 0):
        raise NegativeEps("eps must be >= 0")
    npts = len(space)
    if npts > limit:
        raise SpaceTooLarge(f"{npts} points exceeds the enumeration limit {limit}")

    positive = eps_values[eps_values > 0]
    out = np.full(eps_values.shape, 0.5)
    if positive.size == 0:
        return out

    best = np.full(positive.size, np.inf)
    total = 1 << npts
    cols = np.arange(npts, dtype=np.uint32)
    chunk = max(1, min(total, (1 << 22) // max(1, npts * npts)))
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint32)
        bits = ((masks[:, None] >> cols[None, :]) & 1).astype(bool)
        heavy = bits @ space.mu >= 0.5 - _MASS_TOL
        if not heavy.any():
            continue
        sel = bits[heavy]
        # dmin[s, x] = distance from point x to subset s
        dmin = np.where(sel[:, None, :], space.dist[None, :, :], np.inf).min(axis=2)
        for t, eps in enumerate(positive):
            masses = (dmin <= eps + _DIST_TOL) @ space.mu
            best[t] = min(best[t], masses.min())
    # keep float roundoff inside the declared codomain [0, 1/2]
    out[eps_values > 0] = np.clip(1.0 - best, 0.0, 0.5)
    return out


def concentration_alpha_exact(space: FiniteMMSpace, eps: float, *, limit: int = DEFAULT_ENUMERATION_LIMIT) -> float:
    """Exact concentration function of the space at a single radius."""
    return float(alpha_profile(space, [eps], limit=limit)[0])


def weighted_median(values, weights) -> float:
    """Smallest m with mass(f >= m) >= 1/2 and mass(f <= m) >= 1/2."""
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    cum = np.cumsum(weights[order])
    pos = int(np.searchsorted(cum, 0.5 - _MASS_TOL, side="left"))
    return float(values[order[min(pos, len(order) - 1)]])


def median(space: FiniteMMSpace, f) -> float:
    """Median of a function table with the smallest-median tie-break."""
    return weighted_median(as_function_table(space, f), space.mu)


def expectation(mu, f) -> float:
    """Mean of f under a probability vector."""
    mu = np.asarray(mu, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if mu.shape != f.shape:
        raise LengthMismatch(f"measure shape {mu.shape} != table shape {f.shape}")
    return float(mu @ f)


def weighted_deviation_mass(values, weights, center: float, eps: float) -> float:
    """Mass of {|f - center| > eps} (strict inequality)."""
    if eps <= 0:
        raise NonPositiveEps("eps must be > 0")
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    return float(weights[np.abs(values - center) > eps].sum())


def deviation_mass(mu, f, center: float, eps: float) -> float:
    """Mass of {x : |f(x) - center| > eps} under the probability vector mu."""
    mu = np.asarray(mu, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if mu.shape != f.shape:
        raise LengthMismatch(f"measure shape {mu.shape} != table shape {f.shape}")
    return weighted_deviation_mass(f, mu, center, eps)
