"""Starting configuration: classical scaling, then optimal elastic rescaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Configuration,
    DegenerateConfigurationError,
    DissimilarityData,
    ValidationError,
    pair_distances,
)


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class ScaledInit:
    config: Configuration
    lam: float


def torgerson(data: DissimilarityData, p: int) -> Configuration:
    """Classical (Torgerson) scaling of the dissimilarities.

    Weights are ignored. Negative eigenvalues of the double-centered matrix
    are clamped to zero. Columns come in descending eigenvalue order and
    each column is signed so that its largest-magnitude entry is positive,
    which makes the output deterministic.
    """
    n = data.n
    p = int(p)
    if p < 1 or p > n - 1:
        raise ValidationError(f"dimensionality p={p} must satisfy 1 <= p <= n-1 = {n - 1}")
    sq = data.to_matrix() ** 2
    # double centering without forming J explicitly
    row = sq.mean(axis=1, keepdims=True)
    col = sq.mean(axis=0, keepdims=True)
    b = -0.5 * (sq - row - col + sq.mean())
    b = 0.5 * (b + b.T)
    try:
        evals, evecs = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigendecomposition failed: {exc}") from exc
    idx = np.argsort(evals, kind="stable")[::-1][:p]
    evals = np.maximum(evals[idx], 0.0)
    vecs = evecs[:, idx]
    for k in range(p):
        j = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[j, k] < 0:
            vecs[:, k] = -vecs[:, k]
    x = vecs * np.sqrt(evals)
    return Configuration(x - x.mean(axis=0))


def optimal_lambda(data: DissimilarityData, config: Configuration) -> float:
    """Scale factor minimizing sum w/delta^2 (delta - lam d)^2."""
    d = pair_distances(config)
    u = data.weights / data.delta
    den = float(np.sum(u / data.delta * d**2))
    if not den > 0:
        raise DegenerateConfigurationError("all weighted distances are zero; no scale can be fit")
    return float(np.sum(u * d)) / den


def initial_configuration(data: DissimilarityData, p: int) -> ScaledInit:
    x = torgerson(data, p)
    lam = optimal_lambda(data, x)
    return ScaledInit(config=x.scaled(lam).centered(), lam=lam)
