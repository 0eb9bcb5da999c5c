"""Guttman transform for elastic stress with fixed fitted dissimilarities.

Elastic stress is ordinary weighted stress with effective weights
u = w / delta_hat^2, so the standard SMACOF update applies unchanged.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .core import (
    Configuration,
    DegenerateConfigurationError,
    DissimilarityData,
    ValidationError,
    ZeroDissimilarityError,
    pair_distances,
    pair_indices,
)


class MajorizationError(RuntimeError):
    """The weighted Laplacian system could not be solved."""


def _laplacian(n: int, vals: np.ndarray) -> np.ndarray:
    r, c = pair_indices(n)
    out = np.zeros((n, n))
    out[r, c] = -vals
    out[c, r] = -vals
    out[np.diag_indices(n)] = -out.sum(axis=1)
    return out


class MajorizationWorkspace:
    """Effective weights, their Laplacian V, and a factorization of V + 11'/n.

    Owned by a single solve. Rebuild it whenever the fitted dissimilarities
    change.
    """

    def __init__(self, data: DissimilarityData, delta_hat) -> None:
        dh = np.asarray(delta_hat, dtype=float)
        if dh.shape != (data.m,):
            raise ValidationError(f"delta_hat has shape {dh.shape}, expected ({data.m},)")
        if np.any(dh <= 0):
            k = int(np.flatnonzero(dh <= 0)[0])
            raise ZeroDissimilarityError(f"fitted dissimilarity for pair {data.pair_label(k)} is {float(dh[k])!r}")
        self.n = data.n
        self.delta_hat = dh.copy()
        self.u = data.weights / dh**2
        self.V = _laplacian(self.n, self.u)
        try:
            # V is singular along 1; adding 11'/n makes it definite when the weight graph is connected
            self._factor = cho_factor(self.V + 1.0 / self.n, lower=True, check_finite=False)
        except LinAlgError as exc:
            raise MajorizationError(
                "weighted Laplacian is not invertible on centered vectors; "
                "the graph of positive weights is probably disconnected"
            ) from exc

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Apply the Moore-Penrose inverse of V to centered right-hand sides."""
        y = cho_solve(self._factor, rhs, check_finite=False)
        return y - y.mean(axis=0)

    def step(self, x: np.ndarray, d: np.ndarray) -> np.ndarray:
        """Guttman transform of coordinate array ``x`` whose pair distances are ``d``."""
        pos = d > 0
        vals = np.zeros_like(d)
        vals[pos] = self.u[pos] * self.delta_hat[pos] / d[pos]
        return self.solve(_laplacian(self.n, vals) @ x)


def build_workspace(data: DissimilarityData, delta_hat) -> MajorizationWorkspace:
    return MajorizationWorkspace(data, delta_hat)


def guttman_update(
    ws: MajorizationWorkspace,
    data: DissimilarityData,
    delta_hat,
    config: Configuration,
) -> Configuration:
    """One majorization step X+ = V^+ B(X) X, returned centered.

    ``delta_hat`` must be the vector the workspace was built from; it is
    accepted here so callers state which dissimilarities they majorize.
    """
    if config.n != data.n:
        raise ValidationError(f"configuration has {config.n} points, data has {data.n}")
    if delta_hat is not ws.delta_hat and not np.array_equal(np.asarray(delta_hat), ws.delta_hat):
        raise ValidationError("workspace was built for different fitted dissimilarities")
    x = config.coords
    if not np.any(x - x.mean(axis=0)):
        raise DegenerateConfigurationError("all points coincide; majorization needs a nonzero configuration")
    y = ws.step(x, pair_distances(config))
    if not np.all(np.isfinite(y)):
        raise MajorizationError("linear solve produced non-finite coordinates")
    return Configuration(y)
