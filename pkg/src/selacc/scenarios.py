"""Scripted component bundles exercising each loop exit.

Each scenario wires the seven components with deterministic toy
behaviors over a four-region "scene" instance.  They exist to make
termination behavior testable end to end without any vision code.
"""

from __future__ import annotations

from dataclasses import dataclass

from .asm import AsmComponents, Contradiction, Hypothesis, RelationalGraph

_TRUTH = {"r1": "sky", "r2": "sea", "r3": "rock", "r4": "grass"}
_BASE_SEG = {"r1": "sky", "r2": "water", "r3": "sand", "r4": "tree"}


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    instance: str
    components: AsmComponents
    max_iterations: int


def _chain_graph(seg: dict) -> RelationalGraph:
    """Graph with one node per region and proximity edges between
    consecutive regions present in the segmentation."""
    regions = sorted(seg)
    edges = {(a, b, "proximity") for a, b in zip(regions, regions[1:])}
    return RelationalGraph.from_mapping(seg, edges)


def _truth_verifier(graph: RelationalGraph):
    out = []
    for region in sorted(_TRUTH):
        label = graph.label_of(region)
        if label is not None and label != _TRUTH[region]:
            out.append(Contradiction(region, "occurrence", f"{label} does not fit {region}"))
    return out


def _fix_hypothesizer(contradictions, graph):
    first = contradictions[0]
    return Hypothesis(_TRUTH[first.region_id], first.region_id)


def _features(instance, contradictions=None):
    if contradictions is None:
        return ("image", instance)
    return ("region", tuple(c.region_id for c in contradictions))


def _no_contradiction() -> Scenario:
    components = AsmComponents(
        feature_extractor=_features,
        selector=lambda features, algorithms, hypothesis=None: "alg-base",
        algorithm_registry={"alg-base": lambda instance: dict(_TRUTH)},
        graph_builder=_chain_graph,
        verifier=_truth_verifier,
        hypothesizer=_fix_hypothesizer,
    )
    return Scenario(
        "no-contradiction",
        "initial segmentation is already clean; exits immediately",
        "scene-1",
        components,
        10,
    )


def _stuck_hypothesis() -> Scenario:
    # r1 is always flagged and the proposed fix never changes
    def verifier(graph):
        return [Contradiction("r1", "size", "r1 looks too small")]

    components = AsmComponents(
        feature_extractor=_features,
        selector=lambda features, algorithms, hypothesis=None: (
            "alg-base" if hypothesis is None else "alg-cloud"
        ),
        algorithm_registry={
            "alg-base": lambda instance: dict(_BASE_SEG),
            "alg-cloud": lambda instance: {"r1": "cloud"},
        },
        graph_builder=_chain_graph,
        verifier=verifier,
        hypothesizer=lambda contradictions, graph: Hypothesis("cloud", "r1"),
    )
    return Scenario(
        "stuck-hypothesis",
        "the hypothesizer repeats itself on the second request",
        "scene-1",
        components,
        10,
    )


def _stuck_algorithm() -> Scenario:
    # hypotheses keep changing but re-selection returns the same algorithm
    counter = {"n": 0}

    def hypothesizer(contradictions, graph):
        counter["n"] += 1
        first = contradictions[0]
        return Hypothesis(_TRUTH[first.region_id], first.region_id,
                          {"attempt": str(counter["n"])})

    components = AsmComponents(
        feature_extractor=_features,
        selector=lambda features, algorithms, hypothesis=None: "alg-base",
        algorithm_registry={"alg-base": lambda instance: dict(_BASE_SEG)},
        graph_builder=_chain_graph,
        verifier=_truth_verifier,
        hypothesizer=hypothesizer,
    )
    return Scenario(
        "stuck-algorithm",
        "re-selection cannot leave the current algorithm",
        "scene-1",
        components,
        10,
    )


def _three_fixes() -> Scenario:
    # three wrong regions, one specialist per correct label; each pass fixes one
    def selector(features, algorithms, hypothesis=None):
        if hypothesis is None:
            return "alg-base"
        return f"alg-{hypothesis.proposed_label}"

    registry = {
        "alg-base": lambda instance: dict(_BASE_SEG),
        "alg-sea": lambda instance: {"r2": "sea"},
        "alg-rock": lambda instance: {"r3": "rock"},
        "alg-grass": lambda instance: {"r4": "grass"},
    }
    components = AsmComponents(
        feature_extractor=_features,
        selector=selector,
        algorithm_registry=registry,
        graph_builder=_chain_graph,
        verifier=_truth_verifier,
        hypothesizer=_fix_hypothesizer,
    )
    return Scenario(
        "three-fixes",
        "three contradictions, each pass repairs exactly one region",
        "scene-1",
        components,
        10,
    )


def _oscillating() -> Scenario:
    # verifier is never satisfied; hypotheses and algorithms alternate forever
    counter = {"n": 0}

    def verifier(graph):
        return [Contradiction("r1", "shape", "r1 never verifies")]

    def hypothesizer(contradictions, graph):
        counter["n"] += 1
        label = "cloud" if counter["n"] % 2 else "bird"
        return Hypothesis(label, "r1")

    def selector(features, algorithms, hypothesis=None):
        if hypothesis is None:
            return "alg-base"
        return f"alg-{hypothesis.proposed_label}"

    registry = {
        "alg-base": lambda instance: dict(_BASE_SEG),
        "alg-cloud": lambda instance: {"r1": "cloud"},
        "alg-bird": lambda instance: {"r1": "bird"},
    }
    components = AsmComponents(
        feature_extractor=_features,
        selector=selector,
        algorithm_registry=registry,
        graph_builder=_chain_graph,
        verifier=verifier,
        hypothesizer=hypothesizer,
    )
    return Scenario(
        "oscillating",
        "alternating hypotheses cycle until the iteration cap",
        "scene-1",
        components,
        4,
    )


_FACTORIES = {
    "no-contradiction": _no_contradiction,
    "stuck-hypothesis": _stuck_hypothesis,
    "stuck-algorithm": _stuck_algorithm,
    "three-fixes": _three_fixes,
    "oscillating": _oscillating,
}

SCENARIO_NAMES = tuple(_FACTORIES)


def get_scenario(name: str) -> Scenario:
    """Fresh scenario instance by name (components carry no shared state)."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise KeyError(
            f"unknown scenario {name!r}; available: {', '.join(SCENARIO_NAMES)}"
        ) from None
    return factory()
