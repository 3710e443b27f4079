"""Minimal required selector accuracy.

Binary matrices admit an exact answer: the best column's win rate (a
selector matching fewer rows than that cannot tie the best algorithm's
win count).  Real-valued matrices get a sweep-based criterion instead:
scan an accuracy grid for the first point whose variance-penalized value
clears the best column mean.  Both produce a :class:`BoundReport`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .score_model import ScoreMatrix, column_stats, is_binary
from .selector_sim import SelectorConfig, SweepCurve, sweep

LEMMA_MODES = ("lemma-score", "lemma-literal")


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a minimal-accuracy analysis."""

    mode: str
    sigma_best: float
    best_algorithm: str
    min_accuracy: float
    feasible: bool
    grid_step: float | None = None
    seed: int | None = None
    curve: SweepCurve | None = None
    note: str = ""

    def __post_init__(self):
        if not 0.0 <= self.min_accuracy <= 1.0:
            raise ValueError("min_accuracy must lie in [0, 1]")
        if not 0.0 <= self.sigma_best <= 1.0:
            raise ValueError("sigma_best must lie in [0, 1]")


def _pct(fraction: float) -> float:
    # display conversion; the rounding keeps short decimals short
    # (0.28 -> 28.0, not 28.000000000000004) without touching comparisons,
    # which all happen on the fraction-valued fields
    return round(fraction * 100.0, 10)


def report_to_json(report: BoundReport) -> str:
    data = {
        "mode": report.mode,
        "sigma_best_pct": _pct(report.sigma_best),
        "best_algorithm": report.best_algorithm,
        "min_accuracy_pct": _pct(report.min_accuracy),
        "feasible": report.feasible,
        "grid_step_pct": None if report.grid_step is None else _pct(report.grid_step),
        "seed": report.seed,
        "note": report.note,
        "curve": None if report.curve is None else [
            {
                "accuracy_pct": p.accuracy_pct,
                "mean_score_pct": p.mean_score_pct,
                "mean_variance_pct2": p.mean_variance_pct2,
            }
            for p in report.curve.points
        ],
    }
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _best_by_mean(m: ScoreMatrix):
    stats = column_stats(m)
    j = max(range(len(stats)), key=lambda k: stats[k].mean_score)  # first max wins ties
    return stats, j


def binary_min_accuracy(m: ScoreMatrix) -> BoundReport:
    """Win-rate bound for a binarized matrix.

    The minimal selector accuracy equals the best column's win rate: with
    one-hot rows a selector's score count is exactly the number of rows
    it gets right, so matching the best algorithm requires being correct
    on at least that many rows.
    """
    if not is_binary(m):
        raise ValueError("matrix is not binarized (rows must be one-hot); apply binarize() first")
    stats = column_stats(m)
    j = max(range(len(stats)), key=lambda k: stats[k].win_rate)
    best = stats[j]
    wins = ", ".join(f"{s.algorithm_id}={s.win_count}" for s in stats)
    return BoundReport(
        mode="binary",
        sigma_best=best.win_rate,
        best_algorithm=best.algorithm_id,
        min_accuracy=best.win_rate,
        feasible=True,
        note=f"win counts over {m.n_instances} rows: {wins}",
    )


def criterion_values(curve: SweepCurve, mode: str) -> list[float]:
    """Per-point criterion, in percent units.

    lemma-score: mean_score_pct - mean_variance_pct2;
    lemma-literal: accuracy_pct - mean_variance_pct2.
    """
    if mode not in LEMMA_MODES:
        raise ValueError(f"mode must be one of {LEMMA_MODES}")
    if mode == "lemma-score":
        return [p.mean_score_pct - p.mean_variance_pct2 for p in curve.points]
    return [p.accuracy_pct - p.mean_variance_pct2 for p in curve.points]


def min_accuracy_from_curve(curve: SweepCurve, sigma_best_pct: float, mode: str) -> float | None:
    """Smallest grid accuracy (percent) whose criterion reaches sigma_best_pct.

    Returns None when no grid point qualifies.  Works on any curve,
    including externally measured ones, so published variance readings
    can be evaluated with the exact same arithmetic as simulated sweeps.
    """
    crits = criterion_values(curve, mode)
    for p, crit in zip(curve.points, crits):
        if crit >= sigma_best_pct:
            return p.accuracy_pct
    return None


def lemma_min_accuracy(m: ScoreMatrix, cfg: SelectorConfig, mode: str = "lemma-score",
                       grid_step: float = 0.01, curve: SweepCurve | None = None) -> BoundReport:
    """Variance-penalized minimal accuracy for a real-valued matrix.

    Sweeps the accuracy grid (or evaluates a supplied curve) and returns
    the first grid point whose criterion clears the best column mean.
    An infeasible scan reports min_accuracy 1.0 with feasible=False.
    """
    if mode not in LEMMA_MODES:
        raise ValueError(f"mode must be one of {LEMMA_MODES}")
    stats, j = _best_by_mean(m)
    sigma_best = stats[j].mean_score
    if curve is None:
        curve = sweep(m, cfg, grid_step)
    acc_pct = min_accuracy_from_curve(curve, sigma_best * 100.0, mode)
    if acc_pct is None:
        min_accuracy, feasible = 1.0, False
        note = "no grid point satisfied the criterion"
    else:
        min_accuracy, feasible = acc_pct / 100.0, True
        note = f"criterion first satisfied at {acc_pct}%"
    return BoundReport(
        mode=mode,
        sigma_best=sigma_best,
        best_algorithm=stats[j].algorithm_id,
        min_accuracy=min_accuracy,
        feasible=feasible,
        grid_step=float(grid_step),
        seed=cfg.seed,
        curve=curve,
        note=note,
    )
