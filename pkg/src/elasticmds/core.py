"""Domain types and closed-form stress evaluations for elastic MDS.

Pairs are always indexed in lower-triangle column-major order:
(2,1), (3,1), ..., (n,1), (3,2), ..., (n,n-1). Every vector of length
m = n(n-1)/2 in this package follows that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np


class ValidationError(ValueError):
    """Input data violates a precondition."""


class ZeroDissimilarityError(ValidationError):
    """A dissimilarity is zero (or negative); elastic stress is undefined."""


class ZeroDistanceError(ValidationError):
    """A configuration distance is zero where a logarithm is required."""


class DegenerateConfigurationError(ValidationError):
    """All points coincide, so no scale or direction can be recovered."""


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=64)
def _pair_index_cache(n: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = [], []
    for j in range(n):
        for i in range(j + 1, n):
            rows.append(i)
            cols.append(j)
    r = np.array(rows, dtype=np.intp)
    c = np.array(cols, dtype=np.intp)
    r.setflags(write=False)
    c.setflags(write=False)
    return r, c


def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Zero-based (row, col) index arrays of the canonical pair order.

    ``row > col`` for every pair; pair k joins points ``row[k]`` and
    ``col[k]``.
    """
    return _pair_index_cache(int(n))


def n_from_pairs(m: int) -> int:
    n = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    if n_pairs(n) != m:
        raise ValidationError(f"{m} is not a triangular pair count n(n-1)/2")
    return n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DissimilarityData:
    """Dissimilarities, weights and rank order for one dataset.

    ``order`` is a zero-based permutation that sorts ``delta`` ascending,
    stable by pair index inside groups of tied values. It is computed when
    not supplied.
    """

    n: int
    delta: np.ndarray
    weights: Optional[np.ndarray] = None
    order: Optional[np.ndarray] = None
    labels: Optional[tuple[str, ...]] = None
    tie_blocks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 3:
            raise ValidationError(f"need at least 3 points, got n={n}")
        m = n_pairs(n)
        delta = np.asarray(self.delta, dtype=float).ravel()
        if delta.shape != (m,):
            raise ValidationError(f"delta has length {delta.size}, expected m={m} for n={n}")
        if not np.all(np.isfinite(delta)):
            k = int(np.flatnonzero(~np.isfinite(delta))[0])
            raise ValidationError(f"delta[{k}] {self._pair_name(k, n)} is not finite")
        bad = np.flatnonzero(delta <= 0)
        if bad.size:
            k = int(bad[0])
            raise ZeroDissimilarityError(
                f"dissimilarity for pair {self._pair_name(k, n)} is {float(delta[k])!r}; "
                "elastic stress requires every dissimilarity > 0"
            )

        if self.weights is None:
            weights = np.ones(m)
        else:
            weights = np.asarray(self.weights, dtype=float).ravel()
            if weights.shape != (m,):
                raise ValidationError(f"weights has length {weights.size}, expected m={m}")
            if not np.all(np.isfinite(weights)) or np.any(weights < 0):
                k = int(np.flatnonzero(~(np.isfinite(weights) & (weights >= 0)))[0])
                raise ValidationError(
                    f"weight for pair {self._pair_name(k, n)} is {float(weights[k])!r}; weights must be >= 0"
                )
            if not np.any(weights > 0):
                raise ValidationError("at least one weight must be positive")

        if self.order is None:
            order = np.argsort(delta, kind="stable")
        else:
            order = np.asarray(self.order, dtype=np.intp).ravel()
            if order.shape != (m,) or not np.array_equal(np.sort(order), np.arange(m)):
                raise ValidationError("order is not a permutation of the pair indices")
            if np.any(np.diff(delta[order]) < 0):
                raise ValidationError("order does not sort delta non-decreasingly")
        order = order.astype(np.intp, copy=True)
        order.setflags(write=False)

        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise ValidationError(f"{len(labels)} labels given for n={n} points")
            object.__setattr__(self, "labels", labels)

        # dense rank of each delta value; equal values share a block
        _, blocks = np.unique(delta, return_inverse=True)
        blocks = blocks.astype(np.intp)
        blocks.setflags(write=False)

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "delta", _frozen(delta))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "tie_blocks", blocks)

    @staticmethod
    def _pair_name(k: int, n: int) -> str:
        r, c = pair_indices(n)
        return f"({r[k] + 1},{c[k] + 1})"

    @property
    def m(self) -> int:
        return n_pairs(self.n)

    def pair_label(self, k: int) -> str:
        """Human-readable name of pair k, using labels when present."""
        r, c = pair_indices(self.n)
        if self.labels is not None:
            return f"({self.labels[r[k]]},{self.labels[c[k]]})"
        return f"({r[k] + 1},{c[k] + 1})"

    def with_weights(self, weights: Sequence[float]) -> "DissimilarityData":
        return DissimilarityData(self.n, self.delta, weights, self.order, self.labels)

    def scaled(self, c: float) -> "DissimilarityData":
        """Same data with every dissimilarity multiplied by ``c > 0``."""
        if not c > 0:
            raise ValidationError("scale factor must be positive")
        return DissimilarityData(self.n, c * self.delta, self.weights, self.order, self.labels)

    def to_matrix(self) -> np.ndarray:
        """Full symmetric n x n dissimilarity matrix with zero diagonal."""
        r, c = pair_indices(self.n)
        out = np.zeros((self.n, self.n))
        out[r, c] = self.delta
        out[c, r] = self.delta
        return out


@dataclass(frozen=True)
class Configuration:
    """n points in p dimensions."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        x = np.array(self.coords, dtype=float, copy=True)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[1] < 1:
            raise ValidationError(f"coords must be an n x p matrix, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValidationError("coords contain non-finite values")
        x.setflags(write=False)
        object.__setattr__(self, "coords", x)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def p(self) -> int:
        return self.coords.shape[1]

    def centered(self) -> "Configuration":
        return Configuration(self.coords - self.coords.mean(axis=0))

    def scaled(self, c: float) -> "Configuration":
        return Configuration(c * self.coords)


@dataclass(frozen=True)
class StressReport:
    elastic: float
    ratio_form: float
    log_stress: float
    kruskal_normalized: float

    def as_dict(self) -> dict[str, float]:
        return {
            "elastic": self.elastic,
            "ratio_form": self.ratio_form,
            "log_stress": self.log_stress,
            "kruskal_normalized": self.kruskal_normalized,
        }


def pair_distances(config: Configuration) -> np.ndarray:
    """Euclidean distances of all pairs in canonical order."""
    r, c = pair_indices(config.n)
    diff = config.coords[r] - config.coords[c]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _check(data: DissimilarityData, config: Configuration, delta) -> np.ndarray:
    if config.n != data.n:
        raise ValidationError(f"configuration has {config.n} points, data has {data.n}")
    if delta is None:
        return data.delta
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (data.m,):
        raise ValidationError(f"delta override has shape {delta.shape}, expected ({data.m},)")
    if np.any(delta <= 0):
        k = int(np.flatnonzero(delta <= 0)[0])
        raise ZeroDissimilarityError(f"dissimilarity for pair {data.pair_label(k)} is {float(delta[k])!r}")
    return delta


def elastic_stress(data: DissimilarityData, config: Configuration, delta=None) -> float:
    """Sum of w (delta - d)^2 / delta^2.

    ``delta`` overrides ``data.delta`` (fitted dissimilarities in ordinal
    mode); the weights always come from ``data``.
    """
    delta = _check(data, config, delta)
    d = pair_distances(config)
    return float(np.sum(data.weights * ((delta - d) ** 2 / delta**2)))


def ratio_form_stress(data: DissimilarityData, config: Configuration, delta=None) -> float:
    """Sum of w (1 - d/delta)^2; algebraically equal to :func:`elastic_stress`."""
    delta = _check(data, config, delta)
    d = pair_distances(config)
    return float(np.sum(data.weights * (1.0 - d / delta) ** 2))


def log_stress(data: DissimilarityData, config: Configuration, delta=None) -> float:
    """Sum of w (log delta - log d)^2. Raises ZeroDistanceError if any d is 0."""
    delta = _check(data, config, delta)
    d = pair_distances(config)
    zero = np.flatnonzero(d <= 0)
    if zero.size:
        raise ZeroDistanceError(
            f"distance for pair {data.pair_label(int(zero[0]))} is zero; log-stress is undefined"
        )
    return float(np.sum(data.weights * (np.log(delta) - np.log(d)) ** 2))


def kruskal_stress(data: DissimilarityData, config: Configuration, delta=None) -> float:
    """Weighted squared error normalized by sum of w delta^2. Diagnostic only."""
    delta = _check(data, config, delta)
    denom = float(np.sum(data.weights * delta**2))
    if denom <= 0:
        raise ValidationError("weighted sum of squared dissimilarities is zero")
    d = pair_distances(config)
    return float(np.sum(data.weights * (delta - d) ** 2)) / denom


def stress_report_at(data: DissimilarityData, config: Configuration, delta=None) -> StressReport:
    """All four stress forms at one point.

    Log-stress is reported as ``inf`` when some distance is zero instead of
    raising, so a report can always be attached to a solution.
    """
    try:
        ls = log_stress(data, config, delta)
    except ZeroDistanceError:
        ls = float("inf")
    return StressReport(
        elastic=elastic_stress(data, config, delta),
        ratio_form=ratio_form_stress(data, config, delta),
        log_stress=ls,
        kruskal_normalized=kruskal_stress(data, config, delta),
    )
