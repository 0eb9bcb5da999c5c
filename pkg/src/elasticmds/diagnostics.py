"""Shepard-diagram tables and configuration exports."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Optional, Sequence

import numpy as np

from .core import Configuration, DissimilarityData, ValidationError, pair_distances, pair_indices
from .solver import SolveResult


def fmt(x: float) -> str:
    """17 significant digits; parses back to the identical double."""
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class ShepardRow:
    i: int
    j: int
    delta: float
    dhat: float
    dist: float
    residual_ratio: float
    weight: float


def shepard_table(data: DissimilarityData, result: SolveResult) -> list[ShepardRow]:
    """One row per pair, sorted by observed then fitted dissimilarity.

    Pair indices are 1-based. Sorting on the fitted value inside tie blocks
    keeps the ``dhat`` column non-decreasing for ordinal solutions.
    """
    r, c = pair_indices(data.n)
    d = pair_distances(result.config)
    dh = np.asarray(result.delta_hat, dtype=float)
    ratio = 1.0 - d / dh
    keys = np.lexsort((np.arange(data.m), dh, data.delta))
    return [
        ShepardRow(
            i=int(r[k]) + 1,
            j=int(c[k]) + 1,
            delta=float(data.delta[k]),
            dhat=float(dh[k]),
            dist=float(d[k]),
            residual_ratio=float(ratio[k]),
            weight=float(data.weights[k]),
        )
        for k in keys
    ]


def shepard_stress(rows: Sequence[ShepardRow]) -> float:
    return float(sum(row.weight * row.residual_ratio**2 for row in rows))


def shepard_csv(rows: Sequence[ShepardRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(ShepardRow)])
    for row in rows:
        vals = astuple(row)
        w.writerow([vals[0], vals[1], *(fmt(v) for v in vals[2:])])
    return buf.getvalue()


def export_configuration(result: SolveResult | Configuration, labels: Optional[Sequence[str]] = None) -> str:
    """CSV with columns label, dim1..dimp; points default to P1..Pn."""
    config = result.config if isinstance(result, SolveResult) else result
    if labels is None:
        labels = [f"P{i + 1}" for i in range(config.n)]
    elif len(labels) != config.n:
        raise ValidationError(f"{len(labels)} labels given for {config.n} points")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label"] + [f"dim{k + 1}" for k in range(config.p)])
    for lab, row in zip(labels, config.coords):
        w.writerow([lab, *(fmt(v) for v in row)])
    return buf.getvalue()


def read_configuration(text: str) -> tuple[list[str], Configuration]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if not header or header[0] != "label":
        raise ValidationError("configuration CSV must start with a 'label' column")
    labels, coords = [], []
    for row in reader:
        if not row:
            continue
        labels.append(row[0])
        coords.append([float(v) for v in row[1:]])
    return labels, Configuration(np.array(coords))
