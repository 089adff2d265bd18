"""Distance law for two independent uniform points in a u x u square.

The projected separation d of the two points has a classical piecewise
distribution with support [0, sqrt(2)*u]; the near branch covers d <= u and
the far branch covers the corner region u < d <= sqrt(2)*u. All three closed
forms (density, CDF, partial first moment) are continuous across the seam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)

# Interval endpoints produced by the stratified catch analysis can land a hair
# outside the support through float round-off; treat this much slack (relative
# to the diagonal) as exact-boundary.
_EDGE_RTOL = 1e-9


class SupportError(ValueError):
    """Distance argument outside [0, sqrt(2)*u]."""


@dataclass(frozen=True)
class DistanceLaw:
    u: float

    def __post_init__(self):
        if self.u <= 0:
            raise ValueError("square side u must be positive")

    @property
    def d_max(self) -> float:
        return SQRT2 * self.u

    def _check(self, d: float) -> float:
        hi = self.d_max
        tol = _EDGE_RTOL * hi
        if d < -tol or d > hi + tol:
            raise SupportError(f"distance {d} outside support [0, {hi}]")
        return min(max(d, 0.0), hi)

    def clamp(self, d: float) -> float:
        return min(max(d, 0.0), self.d_max)

    def pdf(self, d: float) -> float:
        d = self._check(d)
        u = self.u
        t = d / u
        if d <= u:
            return (2.0 * d / u**2) * (math.pi - 4.0 * t + t * t)
        q = math.sqrt(d * d - u * u) / u
        return (2.0 * d / u**2) * (4.0 * q - (t * t + 2.0 - math.pi)
                                   - 4.0 * math.atan(q))

    def cdf(self, d: float) -> float:
        d = self._check(d)
        u = self.u
        t = d / u
        if d <= u:
            return t**4 / 2.0 - 8.0 * t**3 / 3.0 + math.pi * t * t
        q = math.sqrt(d * d - u * u) / u
        return (1.0 / 3.0 - t**4 / 2.0 - 4.0 * t * t * math.atan(q)
                + (4.0 / 3.0) * (2.0 * t * t + 1.0) * q
                + (math.pi - 2.0) * t * t)

    def partial_first_moment(self, d: float) -> float:
        """Integral of x * pdf(x) over [0, d], in meters."""
        d = self._check(d)
        u = self.u
        t = d / u
        if d <= u:
            return u * (2.0 * t**5 / 5.0 - 2.0 * t**4 + 2.0 * math.pi * t**3 / 3.0)
        q = math.sqrt(d * d - u * u) / u
        return u * (2.0 / 15.0 - 2.0 * t**5 / 5.0
                    - 8.0 * t**3 * math.atan(q) / 3.0
                    + (2.0 * t**3 + t / 3.0) * q
                    + math.log(t + q) / 3.0
                    + 2.0 * (math.pi - 2.0) * t**3 / 3.0)

    def interval_probability(self, d1: float, d2: float) -> float:
        """Probability mass on [d1, d2]; endpoints clamped, empty intervals give 0."""
        d1 = self.clamp(d1)
        d2 = self.clamp(d2)
        if d2 <= d1:
            return 0.0
        return max(self.cdf(d2) - self.cdf(d1), 0.0)

    def representative_distance(self, d1: float, d2: float,
                                mode: str = "paper-literal") -> float:
        """Single distance standing in for the interval [d1, d2].

        ``paper-literal`` offsets the unnormalized partial moment by d1;
        ``conditional-mean`` is the true conditional expectation of the
        distance given it falls in the interval.
        """
        d1 = self.clamp(d1)
        d2 = self.clamp(d2)
        if mode == "paper-literal":
            if d2 <= d1:
                return d1
            return (self.partial_first_moment(d2)
                    - self.partial_first_moment(d1) + d1)
        if mode == "conditional-mean":
            prob = self.interval_probability(d1, d2)
            if prob <= 0.0:
                raise ValueError(
                    f"conditional mean undefined on empty interval [{d1}, {d2}]")
            return (self.partial_first_moment(d2)
                    - self.partial_first_moment(d1)) / prob
        raise ValueError(f"unknown representative-distance mode {mode!r}")

    def sample_pair_distance(self, rng: np.random.Generator, size=None):
        """Draw the planar distance between two independent uniform points."""
        pts = rng.uniform(0.0, self.u, size=(4,) if size is None else (4, size))
        d = np.hypot(pts[0] - pts[2], pts[1] - pts[3])
        return float(d) if size is None else d


def slant_distance(d_proj: float, h_w: float):
    """Compose a projected ground distance with the warden's altitude."""
    return np.hypot(d_proj, h_w)
