"""Numerical checks of resource bounds on optimized QFI rates.

For a family of models indexed by ``M`` the optimized rate ``I*`` is
expected to obey ``r_lo * R * M <= I* <= r_hi * R * M**2`` for a resource
``R`` (steady excitation number, excitation rate, or 1). The constants are
not derived; they are fitted as the extremes of the observed ratios, and
the check reports how flat each ratio is across the sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def flatness(values) -> float:
    """Relative spread ``max / min - 1`` of positive values."""
    v = np.asarray(values, dtype=float)
    return float(v.max() / v.min() - 1.0)


@dataclass(frozen=True)
class BoundCheckResult:
    """Sandwich ratios for one family.

    Attributes
    ----------
    M : ndarray
    lower_ratio, upper_ratio : ndarray
        ``I* / (R M)`` and ``I* / (R M^2)``.
    r_lower, r_upper : float
        Fitted constants ``min(lower_ratio)`` and ``max(upper_ratio)``.
    lower_flatness, upper_flatness : float
        Relative spread of each ratio.
    tolerance : float
        Spread above which a ratio is flagged as drifting.
    """

    M: np.ndarray
    lower_ratio: np.ndarray
    upper_ratio: np.ndarray
    r_lower: float
    r_upper: float
    lower_flatness: float
    upper_flatness: float
    tolerance: float

    @property
    def lower_saturated(self) -> bool:
        return self.lower_flatness <= self.tolerance

    @property
    def upper_saturated(self) -> bool:
        return self.upper_flatness <= self.tolerance

    @property
    def valid(self) -> bool:
        """Both bounds hold with positive constants (true by construction when finite)."""
        return bool(self.r_lower > 0 and np.isfinite(self.r_upper)
                    and np.all(self.lower_ratio >= self.r_lower)
                    and np.all(self.upper_ratio <= self.r_upper))


def check_bounds(Ms, optimized, resource, tolerance: float = 0.10) -> BoundCheckResult:
    """Fit and check the resource sandwich over a sweep.

    Parameters
    ----------
    Ms : sequence of int
    optimized : sequence of float
        Optimized rates ``I*`` for each ``M``.
    resource : sequence of float or float
        Resource per ``M``; a scalar 1 checks pure mode-number bounds.
    tolerance : float
        Allowed relative spread of a saturated ratio.

    Returns
    -------
    BoundCheckResult
        Violations are reported through the flags, never raised.
    """
    M = np.asarray(Ms, dtype=float)
    opt = np.asarray(optimized, dtype=float)
    res = np.broadcast_to(np.asarray(resource, dtype=float), M.shape)
    lo = opt / (res * M)
    hi = opt / (res * M ** 2)
    return BoundCheckResult(M, lo, hi, float(lo.min()), float(hi.max()),
                            flatness(lo), flatness(hi), tolerance)
