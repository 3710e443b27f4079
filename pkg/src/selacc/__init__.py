"""Selection-accuracy analysis for algorithm portfolios.

Core pieces: score matrices with oracle/statistics primitives
(:mod:`selacc.score_model`), pixel-overlap metrics (:mod:`selacc.metrics`),
imperfect-selector simulation (:mod:`selacc.selector_sim`), minimal
required-accuracy bounds (:mod:`selacc.bounds`), and an iterative
select-verify control loop (:mod:`selacc.asm`).  ``selacc --help`` lists
the command-line front end.
"""

from __future__ import annotations

from .asm import (
    EMPTY_GRAPH,
    RELATION_TAGS,
    AsmComponents,
    AsmState,
    Contradiction,
    Hypothesis,
    RelationalGraph,
    TraceEvent,
    merge_graphs,
    run_asm,
    trace_jsonl,
)
from .bounds import (
    LEMMA_MODES,
    BoundReport,
    binary_min_accuracy,
    criterion_values,
    lemma_min_accuracy,
    min_accuracy_from_curve,
    report_to_json,
)
from .errors import (
    ComponentContractError,
    EnumerationGuardError,
    MapFormatError,
    MatrixFormatError,
)
from .metrics import (
    LabelEvaluation,
    LabelMap,
    PixelCounts,
    count_pixels,
    evaluate_maps,
    f_measure,
    load_label_map,
    reduced_f,
)
from .score_model import (
    AlgorithmStats,
    CostModel,
    ScoreMatrix,
    SelectionVector,
    anti_oracle_selection,
    best_column,
    binarize,
    column_stats,
    is_binary,
    load_scores,
    oracle_selection,
    resolve_allowed,
    selection_mean,
    total_cost,
)
from ._backend import backend_name
from .fixtures import FIXTURE_NAMES, fixture_path
from .scenarios import SCENARIO_NAMES, Scenario, get_scenario
from .selector_sim import (
    DEFAULT_TRIALS,
    ERROR_MODELS,
    WRONG_PICKS,
    SelectorConfig,
    SweepCurve,
    SweepPoint,
    TrialOutcome,
    accuracy_grid,
    curve_to_csv,
    curve_to_json,
    enumerate_error_cases,
    run_trials,
    sweep,
    trial_seed,
    variance,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmStats",
    "AsmComponents",
    "AsmState",
    "BoundReport",
    "ComponentContractError",
    "Contradiction",
    "CostModel",
    "DEFAULT_TRIALS",
    "EMPTY_GRAPH",
    "ERROR_MODELS",
    "EnumerationGuardError",
    "FIXTURE_NAMES",
    "Hypothesis",
    "LEMMA_MODES",
    "LabelEvaluation",
    "LabelMap",
    "MapFormatError",
    "MatrixFormatError",
    "PixelCounts",
    "RELATION_TAGS",
    "RelationalGraph",
    "SCENARIO_NAMES",
    "Scenario",
    "ScoreMatrix",
    "SelectionVector",
    "SelectorConfig",
    "SweepCurve",
    "SweepPoint",
    "TraceEvent",
    "TrialOutcome",
    "WRONG_PICKS",
    "accuracy_grid",
    "anti_oracle_selection",
    "backend_name",
    "best_column",
    "binarize",
    "binary_min_accuracy",
    "column_stats",
    "count_pixels",
    "criterion_values",
    "curve_to_csv",
    "curve_to_json",
    "enumerate_error_cases",
    "evaluate_maps",
    "f_measure",
    "fixture_path",
    "get_scenario",
    "is_binary",
    "lemma_min_accuracy",
    "load_label_map",
    "load_scores",
    "merge_graphs",
    "min_accuracy_from_curve",
    "oracle_selection",
    "reduced_f",
    "report_to_json",
    "resolve_allowed",
    "run_asm",
    "run_trials",
    "selection_mean",
    "sweep",
    "total_cost",
    "trace_jsonl",
    "trial_seed",
    "variance",
]
