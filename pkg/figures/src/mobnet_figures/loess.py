"""Locally weighted linear regression (LOESS) point-estimate smoother.

At each x the fit uses the span-nearest neighbors, tricube-weighted by
scaled distance, and evaluates a weighted least-squares line there. No
robustness iterations and no confidence bands: this is the trend-line
smoother the renderer draws over daily series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LoessParams:
    """Smoothing span as a fraction of the data, local-linear degree."""

    span: float = 0.75
    degree: int = 1

    def __post_init__(self):
        if not 0.0 < self.span <= 1.0:
            raise ValueError(f"span must be in (0, 1], got {self.span}")
        if self.degree != 1:
            raise ValueError("only degree-1 (local linear) fits are supported")


def tricube(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u**3) ** 3


def loess_smooth(x, y, params: LoessParams | None = None) -> np.ndarray:
    """Fitted values at each x.

    Requires at least 3 points, strictly increasing x, and a span wide
    enough for ``span * n >= degree + 1`` neighbors. The farthest of the
    k nearest neighbors gets tricube weight 0, so at least ``degree + 2``
    neighbors are always drawn into each fit.
    """
    params = params or LoessParams()
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"x and y lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError("loess needs at least 3 points")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x must be strictly increasing")
    if params.span * n < params.degree + 1:
        raise ValueError(
            f"span {params.span} covers fewer than {params.degree + 1} "
            f"points of {n}"
        )

    k = min(n, max(params.degree + 2, int(np.ceil(params.span * n))))
    var_floor = 1e-12 * max(1.0, float((x * x).max()))
    fitted = np.empty(n)
    for i, xi in enumerate(x):
        distance = np.abs(x - xi)
        neighbors = np.argsort(distance, kind="stable")[:k]
        h = distance[neighbors].max()
        w = tricube(distance / h)
        w[distance > h] = 0.0
        sw = w.sum()
        mean_x = (w * x).sum() / sw
        mean_y = (w * y).sum() / sw
        var = (w * (x - mean_x) ** 2).sum()
        if var > var_floor:
            beta = (w * (x - mean_x) * (y - mean_y)).sum() / var
        else:
            beta = 0.0
        fitted[i] = mean_y + beta * (xi - mean_x)
    return fitted
