"""Imperfect-selector simulation over a score matrix.

Two complementary engines:

* :func:`enumerate_error_cases` walks every possible placement of k wrong
  selections exactly (small matrices only, guarded combinatorially);
* :func:`run_trials` / :func:`sweep` run seeded Monte Carlo with a strict
  determinism contract: trial t derives its own RNG stream from
  ``seed XOR mix(t)``, so results are bit-identical regardless of
  execution order or backend.

Selections are assembled by a compiled kernel when available (see
``_backend``); the score means are always computed here in shared numpy
code so both backends agree to the last bit.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import _backend
from .errors import EnumerationGuardError
from .score_model import ScoreMatrix, SelectionVector, resolve_allowed

ERROR_MODELS = ("exact-count", "bernoulli")
WRONG_PICKS = ("worst", "random-other", "adversarial")
DEFAULT_TRIALS = 255
ENUMERATION_GUARD_ROWS = 20

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SelectorConfig:
    """Parameters of a simulated imperfect selector."""

    accuracy: float = 1.0
    error_model: str = "exact-count"
    wrong_pick: str = "worst"
    trials: int = DEFAULT_TRIALS
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.accuracy, (int, float)) and math.isfinite(self.accuracy)):
            raise ValueError("accuracy must be a finite number")
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError("accuracy must lie in [0, 1]")
        if self.error_model not in ERROR_MODELS:
            raise ValueError(f"error_model must be one of {ERROR_MODELS}")
        if self.wrong_pick not in WRONG_PICKS:
            raise ValueError(f"wrong_pick must be one of {WRONG_PICKS}")
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        seed = int(self.seed)
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        object.__setattr__(self, "accuracy", float(self.accuracy))
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", seed)


@dataclass(frozen=True)
class TrialOutcome:
    """One simulated selection and the mean score it achieved."""

    selection: SelectionVector
    mean_score: float


@dataclass(frozen=True)
class SweepPoint:
    """One grid point of a sweep, in percent units."""

    accuracy_pct: float
    mean_score_pct: float
    mean_variance_pct2: float


@dataclass(frozen=True)
class SweepCurve:
    """Mean score and variance of trial means along an accuracy grid.

    Points carry percent / percent^2 units, matching the emitted CSV.
    """

    points: tuple[SweepPoint, ...]
    trials_per_point: int
    seed: int
    error_model: str = "exact-count"
    wrong_pick: str = "worst"

    def __post_init__(self):
        pts = tuple(self.points)
        accs = [p.accuracy_pct for p in pts]
        if any(a2 <= a1 for a1, a2 in zip(accs, accs[1:])):
            raise ValueError("point accuracies must be strictly increasing")
        for p in pts:
            if not all(map(math.isfinite, (p.accuracy_pct, p.mean_score_pct, p.mean_variance_pct2))):
                raise ValueError("sweep points must be finite")
        object.__setattr__(self, "points", pts)


def variance(values) -> float:
    """Population variance: mean of |mu - x|^2 (divide by N, not N-1)."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("variance of an empty list")
    if np.all(arr == arr[0]):
        # a constant sample has zero variance; skip the mean round-trip, whose
        # rounding would otherwise leak in as ~1e-28 noise
        return 0.0
    mu = arr.mean()
    return float(np.mean(np.abs(mu - arr) ** 2))


def _mix64(x: int) -> int:
    # splitmix64 finalizer; spreads consecutive trial indices across the seed space
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def trial_seed(seed: int, trial_index: int) -> int:
    """Sub-seed for one trial: seed XOR mix(trial_index)."""
    return (int(seed) ^ _mix64(int(trial_index))) & _MASK64


def _draws(seed: int, trials: int, n: int):
    """Per-trial uniform draws; trial t is a function of (seed, t) only."""
    u = np.empty((trials, n), dtype=np.float64)
    v = np.empty((trials, n), dtype=np.float64)
    for t in range(trials):
        rng = np.random.Generator(np.random.PCG64(trial_seed(seed, t)))
        u[t] = rng.random(n)
        v[t] = rng.random(n)
    return u, v


def _wrong_candidates(scores: np.ndarray, cols: np.ndarray, wrong_pick: str, best: np.ndarray):
    """CSR candidate lists for wrong picks under the given policy.

    worst/adversarial resolve to exactly one candidate per row; random-other
    lists every allowed non-best column (possibly none).
    """
    n = scores.shape[0]
    lists: list[list[int]] = []
    for i in range(n):
        if wrong_pick == "worst":
            sub = scores[i, cols]
            lists.append([int(cols[np.argmin(sub)])])
        else:
            others = cols[cols != best[i]]
            if others.size == 0:
                lists.append([int(best[i])] if wrong_pick == "adversarial" else [])
            elif wrong_pick == "adversarial":
                lists.append([int(others[np.argmin(scores[i, others])])])
            else:  # random-other
                lists.append([int(x) for x in others])
    off = np.zeros(n + 1, dtype=np.int64)
    for i, lst in enumerate(lists):
        off[i + 1] = off[i] + len(lst)
    flat = np.asarray(list(itertools.chain.from_iterable(lists)), dtype=np.int64)
    return flat, off


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _trial_selections(m: ScoreMatrix, cfg: SelectorConfig) -> np.ndarray:
    """(trials, n) matrix of selected column indices."""
    scores = m.scores
    n = m.n_instances
    cols = np.arange(m.n_algorithms, dtype=np.int64)
    best = np.argmax(scores, axis=1).astype(np.int64)
    flat, off = _wrong_candidates(scores, cols, cfg.wrong_pick, best)
    u, v = _draws(cfg.seed, cfg.trials, n)
    if cfg.error_model == "exact-count":
        n_correct = min(n, max(0, _round_half_up(cfg.accuracy * n)))
        return _backend.exact_count_picks(u, v, best, flat, off, n - n_correct)
    return _backend.bernoulli_picks(u, v, cfg.accuracy, best, flat, off)


def _selection_means(m: ScoreMatrix, sel: np.ndarray) -> np.ndarray:
    picked = m.scores[np.arange(m.n_instances)[None, :], sel]
    return picked.mean(axis=1)


def run_trials(m: ScoreMatrix, cfg: SelectorConfig) -> list[TrialOutcome]:
    """Simulate cfg.trials imperfect selections over the full matrix.

    exact-count forces exactly round(accuracy*N) correct rows per trial
    (error positions uniform without replacement); bernoulli makes each
    row independently correct with probability ``accuracy``.  Wrong rows
    follow cfg.wrong_pick.  Deterministic for a fixed (matrix, cfg).
    """
    sel = _trial_selections(m, cfg)
    means = _selection_means(m, sel)
    return [
        TrialOutcome(SelectionVector(tuple(int(c) for c in row)), float(mu))
        for row, mu in zip(sel, means)
    ]


def enumerate_error_cases(m: ScoreMatrix, wrong_count: int, allowed=None,
                          wrong_pick: str = "worst") -> list[TrialOutcome]:
    """Every placement of exactly ``wrong_count`` wrong selections.

    Returns C(N, wrong_count) outcomes in lexicographic error-position
    order.  Only the deterministic policies (worst, adversarial) can be
    enumerated; matrices beyond the row guard must use Monte Carlo.
    """
    n = m.n_instances
    wrong_count = int(wrong_count)
    if not 0 <= wrong_count <= n:
        raise ValueError(f"wrong_count must lie in [0, {n}]")
    if wrong_pick == "random-other":
        raise ValueError("random-other has no deterministic case set; use run_trials")
    if wrong_pick not in ("worst", "adversarial"):
        raise ValueError(f"wrong_pick must be 'worst' or 'adversarial', got {wrong_pick!r}")
    if n > ENUMERATION_GUARD_ROWS:
        raise EnumerationGuardError(
            f"{n} rows exceeds the enumeration guard ({ENUMERATION_GUARD_ROWS}); "
            "use the Monte Carlo path (run_trials / sweep) instead"
        )
    cols = resolve_allowed(m, allowed)
    best = cols[np.argmax(m.scores[:, cols], axis=1)]
    flat, off = _wrong_candidates(m.scores, cols, wrong_pick, best)
    wrong = flat[off[:-1]]  # deterministic policies: one candidate per row
    rows = np.arange(n)
    outcomes = []
    for errs in itertools.combinations(range(n), wrong_count):
        choices = best.copy()
        for i in errs:
            choices[i] = wrong[i]
        mean = float(m.scores[rows, choices].mean())
        outcomes.append(TrialOutcome(SelectionVector(tuple(int(c) for c in choices)), mean))
    return outcomes


def accuracy_grid(grid_step: float) -> list[float]:
    """Grid {0, step, 2*step, ..., 1}; 1.0 is always included."""
    if not (isinstance(grid_step, (int, float)) and 0.0 < grid_step <= 0.5):
        raise ValueError("grid_step must lie in (0, 0.5]")
    step = Fraction(str(grid_step))
    grid = []
    k = 0
    while k * step < 1:
        grid.append(float(k * step))
        k += 1
    grid.append(1.0)
    return grid


def sweep(m: ScoreMatrix, base_cfg: SelectorConfig, grid_step: float = 0.01) -> SweepCurve:
    """Monte Carlo curve of mean score and variance along an accuracy grid.

    Each grid point reuses the same per-trial seeds (common random
    numbers), and the emitted points are in percent / percent^2.
    """
    points = []
    for a in accuracy_grid(grid_step):
        cfg = replace(base_cfg, accuracy=a)
        means_pct = _selection_means(m, _trial_selections(m, cfg)) * 100.0
        points.append(SweepPoint(a * 100.0, float(means_pct.mean()), variance(means_pct)))
    return SweepCurve(tuple(points), base_cfg.trials, base_cfg.seed,
                      base_cfg.error_model, base_cfg.wrong_pick)


def curve_to_csv(curve: SweepCurve) -> str:
    """CSV form: header accuracy_pct,mean_score_pct,mean_variance_pct2."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["accuracy_pct", "mean_score_pct", "mean_variance_pct2"])
    for p in curve.points:
        w.writerow([repr(p.accuracy_pct), repr(p.mean_score_pct), repr(p.mean_variance_pct2)])
    return buf.getvalue()


def curve_to_json(curve: SweepCurve) -> str:
    """JSON form carrying config echo and points, for provenance."""
    data = {
        "error_model": curve.error_model,
        "wrong_pick": curve.wrong_pick,
        "trials_per_point": curve.trials_per_point,
        "seed": curve.seed,
        "points": [
            {
                "accuracy_pct": p.accuracy_pct,
                "mean_score_pct": p.mean_score_pct,
                "mean_variance_pct2": p.mean_variance_pct2,
            }
            for p in curve.points
        ],
    }
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
