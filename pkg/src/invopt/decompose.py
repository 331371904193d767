"""Seasonal-trend decomposition of daily sales series via STL (loess)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from statsmodels.tsa.seasonal import STL

from .demand import SalesSeries
from .errors import DomainError

__all__ = ["Decomposition", "decompose", "SEASONAL_SMOOTHER_LEN"]

# Length of the cycle-subseries loess window, in subseries points.
SEASONAL_SMOOTHER_LEN = 7


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Additive split y = trend + seasonal + residual, exact by construction."""

    observed: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray
    period: int

    def __post_init__(self):
        for name in ("observed", "trend", "seasonal", "residual"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            arr.setflags(write=False)
        if not (len(self.observed) == len(self.trend)
                == len(self.seasonal) == len(self.residual)):
            raise DomainError("decomposition components must share one length")


def decompose(series: SalesSeries | np.ndarray, period: int = 30,
              robustness_iters: int = 1) -> Decomposition:
    """STL decomposition with degree-1 loess smoothers.

    robustness_iters counts outer robustness passes; 0 disables robustness
    weighting entirely. The residual is defined as observed - trend -
    seasonal, so reconstruction is exact rather than merely close.
    """
    y = series.quantities if isinstance(series, SalesSeries) else series
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise DomainError("decompose expects a one-dimensional series")
    if period < 2:
        raise DomainError("period must be >= 2")
    if y.size < 2 * period:
        raise DomainError(
            f"series of length {y.size} is shorter than two periods ({2 * period})")
    if not np.isfinite(y).all():
        raise DomainError("series contains non-finite values")
    if robustness_iters < 0:
        raise DomainError("robustness_iters must be >= 0")

    stl = STL(y, period=period, seasonal=SEASONAL_SMOOTHER_LEN,
              seasonal_deg=1, trend_deg=1, low_pass_deg=1,
              robust=robustness_iters > 0)
    fitted = stl.fit(inner_iter=2 if robustness_iters == 0 else 1,
                     outer_iter=robustness_iters)
    trend = np.asarray(fitted.trend, dtype=float)
    seasonal = np.asarray(fitted.seasonal, dtype=float)
    return Decomposition(observed=y, trend=trend, seasonal=seasonal,
                         residual=y - trend - seasonal, period=period)
