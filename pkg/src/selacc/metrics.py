"""Pixel-overlap scoring for segmentation outputs.

The headline metric combines an overlap reciprocal with a reconstruction
ratio and lives on (0, 2]; the reduced form is just the reconstruction
ratio matched/ground_truth and is what the rest of the package treats as
"the score".  Both operate on :class:`PixelCounts` summaries, which can be
computed from small label maps with :func:`count_pixels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from .errors import MapFormatError


@dataclass(frozen=True)
class PixelCounts:
    result_pixels: int
    matched_pixels: int
    ground_truth_pixels: int

    def __post_init__(self):
        r, m, g = self.result_pixels, self.matched_pixels, self.ground_truth_pixels
        if r < 0 or m < 0:
            raise ValueError("pixel counts must be non-negative")
        if g <= 0:
            raise ValueError("ground_truth_pixels must be positive")
        if m > r or m > g:
            raise ValueError("matched_pixels cannot exceed result or ground truth counts")


@dataclass(frozen=True)
class LabelMap:
    """Row-major grid of integer label ids."""

    width: int
    height: int
    labels: tuple[int, ...]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("dimensions must be positive")
        labels = tuple(int(v) for v in self.labels)
        if len(labels) != self.width * self.height:
            raise ValueError("labels length must equal width*height")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LabelMap":
        height = len(rows)
        if height == 0:
            raise ValueError("need at least one row")
        width = len(rows[0])
        flat: list[int] = []
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged rows")
            flat.extend(int(v) for v in r)
        return cls(width, height, tuple(flat))

    def distinct_labels(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.labels)))


def f_measure(c: PixelCounts) -> float:
    """Overlap score 1/(1 + result - matched) + matched/ground_truth.

    Implemented literally: the first term is a reciprocal of a pixel
    count offset and the total reaches 2.0 on a perfect match.
    """
    return 1.0 / (1 + c.result_pixels - c.matched_pixels) + c.matched_pixels / c.ground_truth_pixels


def reduced_f(c: PixelCounts) -> float:
    """Reconstruction ratio matched/ground_truth, in [0, 1]."""
    return c.matched_pixels / c.ground_truth_pixels


def count_pixels(result: LabelMap, truth: LabelMap, label: int) -> PixelCounts:
    """Tally result/matched/ground-truth pixels for one label.

    The label must occur in ``truth``; maps must have equal dimensions.
    """
    if (result.width, result.height) != (truth.width, truth.height):
        raise ValueError(
            f"dimension mismatch: result {result.width}x{result.height} "
            f"vs truth {truth.width}x{truth.height}"
        )
    label = int(label)
    r = sum(1 for v in result.labels if v == label)
    g = sum(1 for v in truth.labels if v == label)
    if g == 0:
        raise ValueError(f"label {label} absent from ground truth")
    m = sum(1 for a, b in zip(result.labels, truth.labels) if a == label and b == label)
    return PixelCounts(r, m, g)


@dataclass(frozen=True)
class LabelEvaluation:
    label: int
    counts: PixelCounts
    f: float
    reduced: float


def evaluate_maps(result: LabelMap, truth: LabelMap, *, weighted: bool = False):
    """Score every label present in the ground truth.

    Returns (per-label evaluations, mean reduced score).  The mean is
    unweighted by default; ``weighted=True`` weights labels by their
    ground-truth pixel counts.
    """
    evals = []
    for label in truth.distinct_labels():
        c = count_pixels(result, truth, label)
        evals.append(LabelEvaluation(label, c, f_measure(c), reduced_f(c)))
    if weighted:
        total = sum(e.counts.ground_truth_pixels for e in evals)
        mean = sum(e.reduced * e.counts.ground_truth_pixels for e in evals) / total
    else:
        mean = sum(e.reduced for e in evals) / len(evals)
    return evals, mean


def load_label_map(source: str | Path | IO[str]) -> LabelMap:
    """Read a label map from a whitespace-separated text grid."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return _parse_map(fh)
    return _parse_map(source)


def _parse_map(fh: IO[str]) -> LabelMap:
    rows: list[list[int]] = []
    width = None
    for lineno, line in enumerate(fh, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        cells = stripped.split()
        values = []
        for col, cell in enumerate(cells, start=1):
            try:
                v = int(cell)
            except ValueError:
                raise MapFormatError(f"line {lineno}, field {col}: not an integer: {cell!r}") from None
            if v < 0:
                raise MapFormatError(f"line {lineno}, field {col}: negative label {v}")
            values.append(v)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise MapFormatError(f"line {lineno}: expected {width} labels, got {len(values)}")
        rows.append(values)
    if not rows:
        raise MapFormatError("empty label map")
    return LabelMap.from_rows(rows)
