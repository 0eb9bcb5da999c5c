"""Reading, symmetrizing and converting dissimilarity inputs."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Literal, Optional, Sequence

import numpy as np

from .core import DissimilarityData, ValidationError, n_from_pairs, pair_indices

Kind = Literal["similarity", "dissimilarity"]
Transform = Literal["identity", "one-minus", "max-minus"]
FORMATS = ("csv-full", "triangle-rows")
TRANSFORMS = ("identity", "one-minus", "max-minus")


class MatrixParseError(ValidationError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class RawMatrix:
    """A square matrix as read from a file, before conversion.

    ``warnings`` records anything that was silently repaired, such as
    averaging an asymmetric input.
    """

    matrix: np.ndarray
    kind: Kind = "dissimilarity"
    labels: Optional[tuple[str, ...]] = None
    warnings: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def symmetrize(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2


def _as_raw(mat: np.ndarray, kind: Kind, labels, warnings: list[str]) -> RawMatrix:
    n = mat.shape[0]
    if n < 3:
        raise MatrixParseError(f"need at least 3 objects, found n={n}")
    r, c = pair_indices(n)
    asym = np.abs(mat[r, c] - mat[c, r])
    if np.any(asym > 0):
        k = int(np.argmax(asym))
        warnings.append(
            f"matrix is asymmetric (largest difference {asym[k]:g} at ({r[k] + 1},{c[k] + 1})); "
            "averaged with its transpose"
        )
        mat = symmetrize(mat)
    mat = mat.copy()
    mat.setflags(write=False)
    return RawMatrix(mat, kind, tuple(labels) if labels else None, tuple(warnings))


def _number(tok: str, line: int, col: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise MatrixParseError(f"non-numeric token {tok!r}", line, col) from None
    if not np.isfinite(v):
        raise MatrixParseError(f"non-finite value {tok!r}", line, col)
    return v


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            out.append((lineno, s))
    return out


def _parse_csv_full(text: str) -> tuple[np.ndarray, Optional[list[str]]]:
    lines = _content_lines(text)
    if not lines:
        raise MatrixParseError("input is empty")
    rows = [(ln, [t.strip() for t in next(csv.reader([s]))]) for ln, s in lines]

    labels = None
    first_ln, first = rows[0]
    # header when it has text tokens, or when it is the one surplus row of an n x n table
    if not all(_is_number(t) for t in first if t) or (
        len(rows) == len(first) + 1 and all(len(r) == len(first) for _, r in rows[1:])
    ):
        labels = [t for t in first if t]
        rows = rows[1:]
    if labels is not None and rows and all(len(r) == len(labels) + 1 for _, r in rows):
        # leading row-label column; the header may or may not have a blank corner cell
        rows = [(ln, r[1:]) for ln, r in rows]
    elif rows and all(len(r) > 0 and not _is_number(r[0]) for _, r in rows):
        rows = [(ln, r[1:]) for ln, r in rows]

    n = len(rows)
    mat = np.empty((n, n))
    for i, (ln, toks) in enumerate(rows):
        if len(toks) != n:
            raise MatrixParseError(f"expected {n} entries for a square matrix, found {len(toks)}", ln)
        for j, tok in enumerate(toks):
            mat[i, j] = _number(tok, ln, j + 1)
    if labels is not None and len(labels) != n:
        raise MatrixParseError(f"header has {len(labels)} labels for {n} rows", first_ln)
    return mat, labels


def _split(s: str) -> list[str]:
    return [t for t in re.split(r"[,\s]+", s) if t]


def _parse_triangle(text: str, diagonal: Optional[bool]) -> np.ndarray:
    lines = [(ln, _split(s)) for ln, s in _content_lines(text)]
    if not lines:
        raise MatrixParseError("input is empty")
    vals = []
    for i, (ln, toks) in enumerate(lines, start=1):
        if len(toks) != i:
            raise MatrixParseError(f"triangle row {i} should have {i} entries, found {len(toks)}", ln)
        vals.append([_number(t, ln, j + 1) for j, t in enumerate(toks)])
    if diagonal is None:
        diagonal = all(row[-1] == 0 for row in vals)
    if diagonal:
        n = len(vals)
        vals = [row[:-1] for row in vals[1:]]
    else:
        n = len(vals) + 1
    mat = np.zeros((n, n))
    for i, row in enumerate(vals, start=1):
        mat[i, : len(row)] = row
    return mat + mat.T


def parse_matrix(
    text: str,
    format: str = "csv-full",
    kind: Kind = "dissimilarity",
    diagonal: Optional[bool] = None,
) -> RawMatrix:
    """Parse a square matrix from text.

    ``csv-full`` is a comma-separated n x n table with an optional header
    row of labels and an optional leading label column. ``triangle-rows``
    is a lower triangle, one row per line, separated by commas or
    whitespace; line i holds i entries. With ``diagonal=True`` the last
    entry of each line is the diagonal (n lines); with ``False`` there is
    no diagonal (n-1 lines); ``None`` assumes a diagonal when every line
    ends in 0.

    Lines starting with ``#`` are comments. Asymmetric inputs are averaged
    with their transpose and a warning is recorded.
    """
    if format == "csv-full":
        mat, labels = _parse_csv_full(text)
    elif format == "triangle-rows":
        mat, labels = _parse_triangle(text, diagonal), None
    else:
        raise ValidationError(f"unknown matrix format {format!r}; expected one of {FORMATS}")
    return _as_raw(mat, kind, labels, [])


def offdiagonal(raw: RawMatrix) -> np.ndarray:
    r, c = pair_indices(raw.n)
    return raw.matrix[r, c].copy()


def to_dissimilarities(
    raw: RawMatrix,
    transform: str = "identity",
    max_value: Optional[float] = None,
    weights: Optional[Sequence[float]] = None,
) -> DissimilarityData:
    """Convert a raw matrix to validated dissimilarities.

    ``one-minus`` gives 1 - s. ``max-minus`` gives M - s where M is
    ``max_value`` or, by default, the largest entry of the matrix
    including its diagonal.
    """
    vals = offdiagonal(raw)
    if transform == "identity":
        delta = vals
    elif transform == "one-minus":
        delta = 1.0 - vals
    elif transform == "max-minus":
        top = float(raw.matrix.max()) if max_value is None else float(max_value)
        delta = top - vals
    else:
        raise ValidationError(f"unknown transform {transform!r}; expected one of {TRANSFORMS}")
    bad = np.flatnonzero(~(delta > 0))
    if bad.size:
        k = int(bad[0])
        r, c = pair_indices(raw.n)
        name = (
            f"({raw.labels[r[k]]},{raw.labels[c[k]]})" if raw.labels else f"({r[k] + 1},{c[k] + 1})"
        )
        raise ValidationError(
            f"transform {transform!r} gives dissimilarity {delta[k]:g} for pair {name}; must be > 0"
        )
    return DissimilarityData(raw.n, delta, weights=weights, labels=raw.labels)


def write_dissimilarities(data: DissimilarityData) -> str:
    """CSV with columns pair_i, pair_j, delta, weight (1-based indices)."""
    r, c = pair_indices(data.n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pair_i", "pair_j", "delta", "weight"])
    for k in range(data.m):
        w.writerow([r[k] + 1, c[k] + 1, repr(float(data.delta[k])), repr(float(data.weights[k]))])
    return buf.getvalue()


def read_dissimilarities(text: str) -> DissimilarityData:
    lines = _content_lines(text)
    if not lines or lines[0][1].replace(" ", "") != "pair_i,pair_j,delta,weight":
        raise MatrixParseError("expected header pair_i,pair_j,delta,weight", lines[0][0] if lines else None)
    body = lines[1:]
    n = n_from_pairs(len(body))
    r, c = pair_indices(n)
    lookup = {(int(r[k]) + 1, int(c[k]) + 1): k for k in range(len(body))}
    delta = np.empty(len(body))
    weight = np.empty(len(body))
    seen = set()
    for ln, s in body:
        toks = [t.strip() for t in s.split(",")]
        if len(toks) != 4:
            raise MatrixParseError(f"expected 4 fields, found {len(toks)}", ln)
        i, j = int(_number(toks[0], ln, 1)), int(_number(toks[1], ln, 2))
        if i < j:
            i, j = j, i
        k = lookup.get((i, j))
        if k is None or k in seen:
            raise MatrixParseError(f"pair ({i},{j}) is invalid or repeated", ln)
        seen.add(k)
        delta[k] = _number(toks[2], ln, 3)
        weight[k] = _number(toks[3], ln, 4)
    return DissimilarityData(n, delta, weight)


# name -> (file, kind, transform, max_value, citation)
_BUILTIN = {
    "ekman": (
        "ekman.csv",
        "similarity",
        "one-minus",
        None,
        "Ekman (1954), similarities of 14 colors; delta = 1 - s",
    ),
    "morse": (
        "morse.csv",
        "similarity",
        "max-minus",
        100.0,
        "Rothkopf (1957), Morse code confusions of 36 signals; symmetrized, delta = 100 - s",
    ),
}

DATASETS = tuple(_BUILTIN)


def _builtin_entry(name: str):
    try:
        return _BUILTIN[name]
    except KeyError:
        raise ValidationError(
            f"unknown dataset {name!r}; valid names are {', '.join(DATASETS)}"
        ) from None


def builtin_raw(name: str) -> RawMatrix:
    fname, kind, *_ = _builtin_entry(name)
    text = resources.files("elasticmds.data").joinpath(fname).read_text(encoding="utf-8")
    return parse_matrix(text, "csv-full", kind=kind)


def builtin_dataset(name: str) -> DissimilarityData:
    _, _, transform, max_value, _ = _builtin_entry(name)
    return to_dissimilarities(builtin_raw(name), transform, max_value=max_value)


def dataset_citation(name: str) -> str:
    return _builtin_entry(name)[4]
