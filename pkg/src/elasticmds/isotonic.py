"""Weighted monotone regression and the fitted-dissimilarity update.

The update works in reciprocal space: with gamma = -1/delta_hat and
targets c = -1/d, elastic stress becomes sum w d^2 (gamma - c)^2, an
ordinary weighted isotonic regression.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .core import (
    Configuration,
    DegenerateConfigurationError,
    DissimilarityData,
    ValidationError,
    pair_distances,
)

#: distances are clamped below at this fraction of the largest distance
D_FLOOR_FACTOR = 1e-10


@njit(cache=True)
def _pava_kernel(y, w):
    n = y.shape[0]
    mean = np.empty(n)
    wsum = np.empty(n)
    ysum = np.empty(n)  # plain sums, used only by zero-weight blocks
    size = np.empty(n, dtype=np.int64)
    top = -1
    for i in range(n):
        top += 1
        mean[top] = y[i]
        wsum[top] = w[i]
        ysum[top] = y[i]
        size[top] = 1
        while top > 0 and mean[top - 1] > mean[top]:
            tot = wsum[top - 1] + wsum[top]
            ysum[top - 1] += ysum[top]
            size[top - 1] += size[top]
            if tot > 0:
                mean[top - 1] = (mean[top - 1] * wsum[top - 1] + mean[top] * wsum[top]) / tot
            else:
                mean[top - 1] = ysum[top - 1] / size[top - 1]
            wsum[top - 1] = tot
            top -= 1
    out = np.empty(n)
    pos = 0
    for b in range(top + 1):
        for _ in range(size[b]):
            out[pos] = mean[b]
            pos += 1
    return out


def weighted_pava(targets, weights) -> np.ndarray:
    """Non-decreasing least-squares fit by pool-adjacent-violators.

    Single left-to-right pass with a stack of blocks; each block stores its
    weighted mean, total weight and length, so the run time is linear.

    Zero-weight entries are allowed. A block whose total weight is zero
    takes the plain mean of its targets, which keeps the output feasible
    without affecting the loss.

    Args:
        targets: sequence of values to be monotonized.
        weights: non-negative weights, same length as ``targets``.

    Returns:
        Array of fitted values, constant on pooled blocks.
    """
    y = np.asarray(targets, dtype=float).ravel()
    w = np.asarray(weights, dtype=float).ravel()
    if y.shape != w.shape:
        raise ValidationError(f"targets and weights differ in length ({y.size} vs {w.size})")
    if y.size == 0:
        return y.copy()
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite and non-negative")
    if not np.any(w > 0):
        raise ValidationError("all weights are zero")

    return _pava_kernel(y, w)


def clamp_distances(d: np.ndarray) -> np.ndarray:
    dmax = float(d.max()) if d.size else 0.0
    if not dmax > 0:
        raise DegenerateConfigurationError("all points coincide; cannot fit dissimilarities")
    return np.maximum(d, D_FLOOR_FACTOR * dmax)


def fit_delta(data: DissimilarityData, d: np.ndarray) -> np.ndarray:
    """:func:`update_delta` for a precomputed distance vector."""
    d = clamp_distances(d)
    c = -1.0 / d
    perm = np.lexsort((c, data.tie_blocks))
    gamma = np.empty_like(c)
    gamma[perm] = _pava_kernel(c[perm], (data.weights * d**2)[perm])
    return -1.0 / gamma


def update_delta(data: DissimilarityData, config: Configuration) -> np.ndarray:
    """Optimal monotone fitted dissimilarities for a fixed configuration.

    Ties in the observed dissimilarities are handled by the primary
    approach: inside a tie block the pairs are ordered by ascending target,
    so tied pairs may end up with different fitted values. Distances below
    ``D_FLOOR_FACTOR`` times the largest distance are clamped first.
    """
    if config.n != data.n:
        raise ValidationError(f"configuration has {config.n} points, data has {data.n}")
    return fit_delta(data, pair_distances(config))
