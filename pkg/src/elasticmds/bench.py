"""Timing harness for full solves, summarized like R's microbenchmark."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

STAT_NAMES = ("min", "lq", "mean", "median", "uq", "max")


@dataclass(frozen=True)
class BenchSummary:
    """Wall-clock statistics in milliseconds."""

    label: str
    min: float
    lq: float
    mean: float
    median: float
    uq: float
    max: float
    reps: int

    def stats(self) -> tuple[float, ...]:
        return tuple(getattr(self, s) for s in STAT_NAMES)


def summarize(label: str, times_ms: Sequence[float]) -> BenchSummary:
    t = np.asarray(times_ms, dtype=float)
    if t.size < 1:
        raise ValueError("need at least one timing")
    lq, med, uq = np.quantile(t, [0.25, 0.5, 0.75])
    return BenchSummary(
        label=label,
        min=float(t.min()),
        lq=float(lq),
        # clamp guards against rounding when all timings are equal
        mean=float(min(max(t.mean(), t.min()), t.max())),
        median=float(med),
        uq=float(uq),
        max=float(t.max()),
        reps=int(t.size),
    )


def time_calls(fn: Callable[[], object], reps: int, warmup: int = 0) -> list[float]:
    """Run ``fn`` ``warmup`` times untimed, then ``reps`` timed runs (ms)."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    for _ in range(max(0, warmup)):
        fn()
    out = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        out.append((time.perf_counter_ns() - t0) / 1e6)
    return out


def format_table(rows: Sequence[BenchSummary]) -> str:
    width = max([len(r.label) for r in rows] + [5])
    head = " " * width + "".join(f"{s:>10}" for s in STAT_NAMES) + f"{'reps':>7}"
    lines = [head]
    for r in rows:
        lines.append(f"{r.label:<{width}}" + "".join(f"{v:10.2f}" for v in r.stats()) + f"{r.reps:7d}")
    return "\n".join(lines)


def bench_csv(rows: Sequence[BenchSummary]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", *STAT_NAMES, "reps"])
    for r in rows:
        w.writerow([r.label, *(repr(v) for v in r.stats()), r.reps])
    return buf.getvalue()


def read_bench_csv(text: str) -> list[BenchSummary]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        BenchSummary(label=row["label"], reps=int(row["reps"]), **{s: float(row[s]) for s in STAT_NAMES})
        for row in reader
    ]
