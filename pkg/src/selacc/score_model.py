"""Score matrices, per-algorithm statistics, and oracle selection.

A :class:`ScoreMatrix` holds one score per (instance, algorithm) pair as a
fraction in [0, 1].  Everything downstream (worst-case enumeration, Monte
Carlo sweeps, accuracy bounds) is built on the handful of primitives here:
column statistics, row-argmax selection, binarization, and an optional
computation-cost model.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .errors import MatrixFormatError


@dataclass(frozen=True)
class ScoreMatrix:
    """Immutable (instances x algorithms) score table with fraction scores."""

    scores: np.ndarray
    instance_ids: tuple[str, ...]
    algorithm_ids: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.scores, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("scores must be a 2-D array with at least one row and column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("scores must be finite")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("scores must lie in [0, 1]; use percent=True to ingest 0-100 values")
        instances = tuple(str(x) for x in self.instance_ids)
        algorithms = tuple(str(x) for x in self.algorithm_ids)
        if len(instances) != arr.shape[0]:
            raise ValueError("instance_ids length does not match row count")
        if len(algorithms) != arr.shape[1]:
            raise ValueError("algorithm_ids length does not match column count")
        if len(set(instances)) != len(instances):
            raise ValueError("instance_ids must be unique")
        if len(set(algorithms)) != len(algorithms):
            raise ValueError("algorithm_ids must be unique")
        arr.setflags(write=False)
        object.__setattr__(self, "scores", arr)
        object.__setattr__(self, "instance_ids", instances)
        object.__setattr__(self, "algorithm_ids", algorithms)

    @classmethod
    def from_array(cls, values, algorithm_ids=None, instance_ids=None, *, percent=False):
        """Build a matrix from any 2-D array-like.

        With ``percent=True`` the values are expected in 0-100 and divided
        by 100.  Ids default to ``inst1..instN`` / ``alg1..algM``.
        """
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("values must be 2-D")
        if percent:
            arr = arr / 100.0
        n, m = arr.shape
        if instance_ids is None:
            instance_ids = tuple(f"inst{i + 1}" for i in range(n))
        if algorithm_ids is None:
            algorithm_ids = tuple(f"alg{j + 1}" for j in range(m))
        return cls(arr, tuple(instance_ids), tuple(algorithm_ids))

    @property
    def n_instances(self) -> int:
        return self.scores.shape[0]

    @property
    def n_algorithms(self) -> int:
        return self.scores.shape[1]

    def column_index(self, key) -> int:
        """Resolve an algorithm reference (id string or 0-based index)."""
        if isinstance(key, str):
            try:
                return self.algorithm_ids.index(key)
            except ValueError:
                raise KeyError(f"unknown algorithm id {key!r}") from None
        idx = int(key)
        if not 0 <= idx < self.n_algorithms:
            raise IndexError(f"algorithm index {idx} out of range for {self.n_algorithms} columns")
        return idx


@dataclass(frozen=True)
class AlgorithmStats:
    """Mean score and win statistics for one column."""

    algorithm_id: str
    mean_score: float
    win_count: int
    win_rate: float


@dataclass(frozen=True)
class SelectionVector:
    """One chosen algorithm column per instance."""

    choices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(int(c) for c in self.choices))


@dataclass(frozen=True)
class CostModel:
    """Per-run computation costs plus a flat per-selection overhead."""

    per_run_cost: np.ndarray
    selector_cost: float = 0.0

    def __post_init__(self):
        arr = np.array(self.per_run_cost, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError("per_run_cost must be 2-D")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
            raise ValueError("costs must be finite and non-negative")
        if self.selector_cost < 0.0:
            raise ValueError("selector_cost must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "per_run_cost", arr)
        object.__setattr__(self, "selector_cost", float(self.selector_cost))


def resolve_allowed(m: ScoreMatrix, allowed=None) -> np.ndarray:
    """Normalize an optional algorithm subset to a sorted index array.

    ``allowed`` may mix id strings and 0-based indices; ``None`` means all
    columns.
    """
    if allowed is None:
        return np.arange(m.n_algorithms, dtype=np.int64)
    idx = sorted({m.column_index(a) for a in allowed})
    if not idx:
        raise ValueError("allowed subset must not be empty")
    return np.asarray(idx, dtype=np.int64)


def column_stats(m: ScoreMatrix) -> list[AlgorithmStats]:
    """Per-column mean score and row-win statistics.

    A column wins a row when it holds the row maximum; ties go to the
    lowest column index, so win rates always sum to 1.
    """
    means = m.scores.mean(axis=0)
    winners = np.argmax(m.scores, axis=1)  # ties -> lowest index
    counts = np.bincount(winners, minlength=m.n_algorithms)
    n = m.n_instances
    return [
        AlgorithmStats(m.algorithm_ids[j], float(means[j]), int(counts[j]), counts[j] / n)
        for j in range(m.n_algorithms)
    ]


def best_column(m: ScoreMatrix) -> int:
    """Index of the column with the highest mean score (ties -> lowest)."""
    return int(np.argmax(m.scores.mean(axis=0)))


def binarize(m: ScoreMatrix) -> ScoreMatrix:
    """One-hot each row at its argmax (ties -> lowest column index)."""
    out = np.zeros_like(m.scores)
    out[np.arange(m.n_instances), np.argmax(m.scores, axis=1)] = 1.0
    return ScoreMatrix(out, m.instance_ids, m.algorithm_ids)


def is_binary(m: ScoreMatrix) -> bool:
    """True when every row is one-hot with exact 0.0/1.0 entries."""
    s = m.scores
    return bool(np.all((s == 0.0) | (s == 1.0)) and np.all(s.sum(axis=1) == 1.0))


def oracle_selection(m: ScoreMatrix, allowed=None) -> tuple[SelectionVector, float]:
    """Virtual-best selection: per-row argmax over the allowed columns.

    Returns the selection and its mean score; no selector can beat it on
    the same subset.
    """
    cols = resolve_allowed(m, allowed)
    sub = m.scores[:, cols]
    picks = cols[np.argmax(sub, axis=1)]
    mean = float(m.scores[np.arange(m.n_instances), picks].mean())
    return SelectionVector(tuple(picks)), mean


def anti_oracle_selection(m: ScoreMatrix, allowed=None) -> tuple[SelectionVector, float]:
    """Worst selection: per-row argmin over the allowed columns."""
    cols = resolve_allowed(m, allowed)
    sub = m.scores[:, cols]
    picks = cols[np.argmin(sub, axis=1)]
    mean = float(m.scores[np.arange(m.n_instances), picks].mean())
    return SelectionVector(tuple(picks)), mean


def selection_mean(m: ScoreMatrix, v: SelectionVector) -> float:
    """Mean score achieved by a selection vector."""
    choices = np.asarray(v.choices, dtype=np.int64)
    if choices.shape[0] != m.n_instances:
        raise ValueError("selection length does not match instance count")
    if choices.size and (choices.min() < 0 or choices.max() >= m.n_algorithms):
        raise ValueError("selection references an out-of-range column")
    return float(m.scores[np.arange(m.n_instances), choices].mean())


def total_cost(c: CostModel, v: SelectionVector) -> float:
    """Total processing cost: per instance, selector overhead + chosen run."""
    n = c.per_run_cost.shape[0]
    choices = np.asarray(v.choices, dtype=np.int64)
    if choices.shape[0] != n:
        raise ValueError("selection length does not match cost model rows")
    if choices.size and (choices.min() < 0 or choices.max() >= c.per_run_cost.shape[1]):
        raise ValueError("selection references an out-of-range column")
    runs = c.per_run_cost[np.arange(n), choices]
    return float(runs.sum() + c.selector_cost * n)


def load_scores(source: str | Path | IO[str]) -> ScoreMatrix:
    """Read a score matrix from CSV.

    Expected layout: header ``instance,<alg-1>,...,<alg-M>`` followed by one
    row per instance (id then M numbers).  Values may be fractions in
    [0, 1] or percentages in [0, 100]; if any value exceeds 1 the whole
    file is treated as percent.  Raises :class:`MatrixFormatError` with
    line/column positions on malformed input.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _parse_scores(fh)
    return _parse_scores(source)


def _parse_scores(fh: IO[str]) -> ScoreMatrix:
    reader = csv.reader(fh)
    header = None
    instance_ids: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = [cell.strip() for cell in row]
            if len(header) < 2:
                raise MatrixFormatError("header needs an instance column plus at least one algorithm", line=lineno)
            algs = header[1:]
            if any(not a for a in algs):
                raise MatrixFormatError("empty algorithm id in header", line=lineno)
            if len(set(algs)) != len(algs):
                raise MatrixFormatError("duplicate algorithm ids in header", line=lineno)
            continue
        if len(row) != len(header):
            raise MatrixFormatError(
                f"expected {len(header)} fields, got {len(row)}", line=lineno
            )
        inst = row[0].strip()
        if not inst:
            raise MatrixFormatError("empty instance id", line=lineno, column=1)
        if inst in seen:
            raise MatrixFormatError(f"duplicate instance id {inst!r}", line=lineno, column=1)
        seen.add(inst)
        values = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise MatrixFormatError(f"not a number: {cell!r}", line=lineno, column=col) from None
            if not np.isfinite(v):
                raise MatrixFormatError(f"non-finite score {cell!r}", line=lineno, column=col)
            if v < 0.0 or v > 100.0:
                raise MatrixFormatError(f"score {cell!r} outside [0, 100]", line=lineno, column=col)
            values.append(v)
        instance_ids.append(inst)
        rows.append(values)
    if header is None:
        raise MatrixFormatError("empty file: missing header")
    if not rows:
        raise MatrixFormatError("no data rows after the header")
    arr = np.asarray(rows, dtype=np.float64)
    if np.any(arr > 1.0):
        arr = arr / 100.0  # whole file auto-detected as percent
    return ScoreMatrix(arr, tuple(instance_ids), tuple(header[1:]))
