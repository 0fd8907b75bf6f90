"""
Ensemble statistics: the Moments monoid and jackknife errors.

Key insight: mean() is NOT a monoid, so partial means from parallel chunks
cannot simply be averaged. (count, mean, M2) triples ARE monoidal under the
pairwise update below, so chunk results merge in any grouping and order:

    merge(merge(a, b), c) == merge(a, merge(b, c))   (up to rounding)
    merge(Moments.zero(), a) == a

Within a chunk the moments come from numpy's pairwise summation, so the
reported mean does not depend on how an ensemble was split.
"""

import math
from collections.abc import Callable, Iterable
from typing import NamedTuple

import numpy as np


class Moments(NamedTuple):
    """Count, mean and sum of squared deviations (M2) of a sample."""

    count: int
    mean: float
    m2: float

    @classmethod
    def zero(cls) -> "Moments":
        """Neutral element: the empty sample."""
        return cls(0, 0.0, 0.0)

    @classmethod
    def of(cls, samples: Iterable[float] | np.ndarray) -> "Moments":
        """Moments of a sample, computed with pairwise summation."""
        x = np.asarray(samples, dtype=np.float64).ravel()
        if x.size == 0:
            return cls.zero()
        mean = float(np.mean(x))
        return cls(int(x.size), mean, float(np.sum((x - mean) ** 2)))

    def merge(self, other: "Moments") -> "Moments":
        """Associative combination of two partial samples (Chan et al. update)."""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return Moments(n, mean, m2)

    def add(self, value: float) -> "Moments":
        """Fold a single observation into the sample."""
        return self.merge(Moments(1, float(value), 0.0))

    @property
    def variance(self) -> float:
        """Unbiased sample variance (nan for fewer than two samples)."""
        if self.count < 2:
            return math.nan
        return self.m2 / (self.count - 1)

    @property
    def std_error(self) -> float:
        """Standard error of the mean."""
        if self.count < 2:
            return math.nan
        return math.sqrt(self.variance / self.count)


def merge_all(parts: Iterable[Moments]) -> Moments:
    """Fold a collection of partial moments."""
    total = Moments.zero()
    for part in parts:
        total = total.merge(part)
    return total


def standard_error(samples: np.ndarray) -> float:
    """Standard error of the sample mean."""
    return Moments.of(samples).std_error


def jackknife(
    samples: np.ndarray,
    transform: Callable[[np.ndarray], np.ndarray] = lambda m: m,
) -> tuple[float, float]:
    """
    Delete-one jackknife for an estimator that is a function of a sample mean.

    Args:
        samples: 1-D sample
        transform: vectorised function applied to the (leave-one-out) means

    Returns:
        (estimate, jackknife standard error)
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    n = x.size
    if n < 2:
        raise ValueError("jackknife needs at least two samples")
    total = float(np.sum(x))
    estimate = float(transform(np.asarray(total / n)))
    leave_one_out = transform((total - x) / (n - 1))
    spread = leave_one_out - np.mean(leave_one_out)
    return estimate, float(np.sqrt((n - 1) / n * np.sum(spread**2)))
