"""Alternating least squares for metric (ratio) and ordinal elastic MDS."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .core import (
    Configuration,
    DissimilarityData,
    StressReport,
    ValidationError,
    pair_indices,
    stress_report_at,
)
from .initial import initial_configuration
from .isotonic import fit_delta
from .majorize import build_workspace

Level = Literal["ratio", "ordinal"]
LEVELS = ("ratio", "ordinal")


@dataclass(frozen=True)
class SolveOptions:
    level: Level = "ordinal"
    p: int = 2
    max_iter: int = 1000
    eps: float = 1e-6
    relative: bool = False

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise ValidationError(f"level must be one of {LEVELS}, got {self.level!r}")
        if int(self.p) < 1:
            raise ValidationError(f"p must be >= 1, got {self.p}")
        if int(self.max_iter) < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter}")
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise ValidationError(f"eps must be a positive number, got {self.eps}")

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "p": int(self.p),
            "max_iter": int(self.max_iter),
            "eps": float(self.eps),
            "relative": bool(self.relative),
        }


@dataclass
class SolveResult:
    """Outcome of :func:`solve`.

    ``stress_trace[0]`` is the stress of the scaled starting configuration;
    entry ``k`` is the stress after iteration ``k``, so
    ``len(stress_trace) == iterations + 1``.
    """

    config: Configuration
    delta_hat: np.ndarray
    stress_trace: list[float]
    iterations: int
    converged: bool
    options: SolveOptions
    report: Optional[StressReport] = None
    start_lambda: float = field(default=1.0)

    @property
    def stress(self) -> float:
        return self.stress_trace[-1]


class NonFiniteStressError(ArithmeticError):
    """Stress became NaN or infinite; the partial state is attached.

    ``coords`` is the raw coordinate array, which may itself be non-finite.
    """

    def __init__(self, message: str, iteration: int, coords: np.ndarray,
                 delta_hat: np.ndarray, stress_trace: list[float]) -> None:
        super().__init__(message)
        self.iteration = iteration
        self.coords = coords
        self.delta_hat = delta_hat
        self.stress_trace = stress_trace


def solve(data: DissimilarityData, opts: Optional[SolveOptions] = None) -> SolveResult:
    """Minimize elastic stress from the scaled Torgerson start.

    Ratio mode repeats the majorization step with the observed
    dissimilarities. Ordinal mode alternates one majorization step with one
    monotone regression of the fitted dissimilarities; the first step uses
    the observed dissimilarities. Iteration stops when the change in stress
    drops below ``opts.eps`` or after ``opts.max_iter`` iterations.
    """
    opts = opts or SolveOptions()
    start = initial_configuration(data, opts.p)
    rows, cols = pair_indices(data.n)
    w = data.weights
    ordinal = opts.level == "ordinal"

    def dist(a):
        diff = a[rows] - a[cols]
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    x = np.array(start.config.coords)
    d = dist(x)
    delta_hat = data.delta.copy()
    ws = build_workspace(data, delta_hat)

    prev = float(np.sum(w * ((delta_hat - d) ** 2 / delta_hat**2)))
    trace = [prev]
    converged = False
    it = 0
    for it in range(1, int(opts.max_iter) + 1):
        x = ws.step(x, d)
        d = dist(x)
        if not np.all(np.isfinite(d)):
            raise NonFiniteStressError(
                f"configuration became non-finite at iteration {it}", it, x, delta_hat, trace
            )
        if ordinal:
            delta_hat = fit_delta(data, d)
            ws = build_workspace(data, delta_hat)
        cur = float(np.sum(w * ((delta_hat - d) ** 2 / delta_hat**2)))
        trace.append(cur)
        if not math.isfinite(cur):
            raise NonFiniteStressError(
                f"stress is {cur} at iteration {it}", it, x, delta_hat, trace
            )
        change = abs(prev - cur)
        if opts.relative:
            change = change / prev if prev > 0 else 0.0
        if change < opts.eps:
            converged = True
            break
        prev = cur

    x = Configuration(x)
    result = SolveResult(
        config=x,
        delta_hat=delta_hat,
        stress_trace=trace,
        iterations=it,
        converged=converged,
        options=opts,
        start_lambda=start.lam,
    )
    result.report = stress_report(data, result)
    return result


def stress_report(data: DissimilarityData, result: SolveResult) -> StressReport:
    """Stress diagnostics at the solution, using the fitted dissimilarities."""
    return stress_report_at(data, result.config, result.delta_hat)
