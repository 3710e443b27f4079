"""Iterative select-process-verify-hypothesize control loop.

The loop runs over seven pluggable components (feature extractor,
selector, algorithm registry, graph builder, verifier, hypothesizer,
merger) and a relational-graph state.  One pass: verify the current
graph; stop if clean; otherwise hypothesize a fix, re-select an
algorithm from region features, re-process, and merge the new graph in.
Termination happens through four recorded exits:

* ``no-contradiction`` - the verifier found nothing to fix;
* ``no-new-hypothesis`` - the hypothesizer repeated itself;
* ``no-new-algorithm`` - re-selection returned the current algorithm;
* ``max-iterations`` - safety net, since an alternating hypothesizer
  can cycle forever otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .errors import ComponentContractError

RELATION_TAGS = ("size", "shape", "proximity", "occurrence")

EXIT_NO_CONTRADICTION = "no-contradiction"
EXIT_NO_NEW_HYPOTHESIS = "no-new-hypothesis"
EXIT_NO_NEW_ALGORITHM = "no-new-algorithm"
EXIT_MAX_ITERATIONS = "max-iterations"


@dataclass(frozen=True)
class RelationalGraph:
    """Labeled regions plus tagged relations between them.

    Nodes are (region_id, label) pairs with one label per region; edges
    are (region_a, region_b, tag) triples whose endpoints must be nodes.
    """

    nodes: frozenset = frozenset()
    edges: frozenset = frozenset()

    def __post_init__(self):
        nodes = frozenset((str(r), str(l)) for r, l in self.nodes)
        edges = frozenset((str(a), str(b), str(t)) for a, b, t in self.edges)
        regions = [r for r, _ in nodes]
        if len(set(regions)) != len(regions):
            raise ValueError("a region may carry only one label")
        region_set = set(regions)
        for a, b, tag in edges:
            if tag not in RELATION_TAGS:
                raise ValueError(f"unknown relation tag {tag!r}; expected one of {RELATION_TAGS}")
            if a not in region_set or b not in region_set:
                raise ValueError(f"edge ({a}, {b}, {tag}) references a region without a node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_mapping(cls, labels: Mapping[str, str], edges=()) -> "RelationalGraph":
        return cls(frozenset(labels.items()), frozenset(edges))

    def label_of(self, region_id: str) -> str | None:
        for r, label in self.nodes:
            if r == region_id:
                return label
        return None

    def as_mapping(self) -> dict[str, str]:
        return {r: label for r, label in sorted(self.nodes)}


EMPTY_GRAPH = RelationalGraph()


@dataclass(frozen=True)
class Contradiction:
    region_id: str
    violated_relation: str
    detail: str = ""

    def __post_init__(self):
        if self.violated_relation not in RELATION_TAGS:
            raise ValueError(f"violated_relation must be one of {RELATION_TAGS}")


@dataclass(frozen=True)
class Hypothesis:
    """Proposed relabeling for a region; equality drives the stuck exit."""

    proposed_label: str
    target_region: str
    attributes: tuple = ()

    def __post_init__(self):
        attrs = self.attributes
        if isinstance(attrs, Mapping):
            attrs = tuple(sorted((str(k), str(v)) for k, v in attrs.items()))
        else:
            attrs = tuple((str(k), str(v)) for k, v in attrs)
        object.__setattr__(self, "attributes", attrs)


@dataclass(frozen=True)
class TraceEvent:
    iteration: int
    event_type: str
    payload: dict


@dataclass
class AsmState:
    """Evolving loop state; ``trace`` is append-only and iteration-ordered."""

    iteration: int = 0
    graph: RelationalGraph = EMPTY_GRAPH
    last_hypothesis: Hypothesis | None = None
    last_algorithm: str | None = None
    trace: list[TraceEvent] = field(default_factory=list)
    exit_reason: str | None = None


@dataclass(frozen=True)
class AsmComponents:
    """The seven pluggable pieces the loop orchestrates.

    feature_extractor(instance, contradictions=None) -> opaque features;
    selector(features, algorithm_ids, hypothesis=None) -> algorithm id;
    algorithm_registry: mapping id -> callable(instance) -> segmentation;
    graph_builder(segmentation) -> RelationalGraph;
    verifier(graph) -> sequence of Contradiction (empty = clean);
    hypothesizer(contradictions, graph) -> Hypothesis;
    merger(old_graph, new_graph) -> RelationalGraph.
    """

    feature_extractor: Callable
    selector: Callable
    algorithm_registry: Mapping[str, Callable]
    graph_builder: Callable
    verifier: Callable
    hypothesizer: Callable
    merger: Callable = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.merger is None:
            object.__setattr__(self, "merger", merge_graphs)
        if not self.algorithm_registry:
            raise ValueError("algorithm_registry must not be empty")


def merge_graphs(old: RelationalGraph, new: RelationalGraph) -> RelationalGraph:
    """Combine graphs: new labels override old ones per region, and an
    edge pair re-reported by the new graph replaces that pair's old tags.
    """
    labels = {r: l for r, l in sorted(old.nodes)}
    labels.update({r: l for r, l in sorted(new.nodes)})
    new_pairs = {(a, b) for a, b, _ in new.edges}
    edges = {e for e in old.edges if (e[0], e[1]) not in new_pairs} | set(new.edges)
    return RelationalGraph(frozenset(labels.items()), frozenset(edges))


def trace_jsonl(state: AsmState) -> str:
    """One JSON object per trace event: {iteration, event_type, payload}."""
    lines = [
        json.dumps(
            {"iteration": e.iteration, "event_type": e.event_type, "payload": e.payload},
            sort_keys=True,
        )
        for e in state.trace
    ]
    return "\n".join(lines) + "\n"


def _graph_summary(g: RelationalGraph) -> dict:
    return {"nodes": len(g.nodes), "edges": len(g.edges)}


def run_asm(instance: Any, components, max_iterations: int = 25) -> AsmState:
    """Run the control loop to one of its four exits.

    ``components`` may be an :class:`AsmComponents` or a mapping with the
    same seven keys.  Component contract violations (unknown algorithm
    id, wrong result types) abort with a diagnostic ``abort`` trace event
    and raise :class:`ComponentContractError` carrying the state.
    """
    if int(max_iterations) < 1:
        raise ValueError("max_iterations must be >= 1")
    if isinstance(components, Mapping):
        components = AsmComponents(**components)
    c = components
    state = AsmState()

    def log(event_type: str, **payload):
        state.trace.append(TraceEvent(state.iteration, event_type, payload))

    def abort(message: str):
        log("abort", error=message)
        err = ComponentContractError(message)
        err.state = state
        raise err

    def select(features, hypothesis):
        alg = c.selector(features, tuple(c.algorithm_registry), hypothesis)
        if alg not in c.algorithm_registry:
            abort(f"selector returned unknown algorithm id {alg!r}")
        log("select", algorithm=alg)
        return alg

    def process(alg):
        seg = c.algorithm_registry[alg](instance)
        log("process", algorithm=alg)
        graph = c.graph_builder(seg)
        if not isinstance(graph, RelationalGraph):
            abort("graph_builder must return a RelationalGraph")
        log("graph", **_graph_summary(graph))
        return graph

    features = c.feature_extractor(instance)
    log("features", scope="image")
    alg = select(features, None)
    state.last_algorithm = alg
    state.graph = process(alg)

    while True:
        contradictions = list(c.verifier(state.graph))
        if any(not isinstance(x, Contradiction) for x in contradictions):
            abort("verifier must return Contradiction items")
        log("verify", contradictions=[x.region_id for x in contradictions])
        if not contradictions:
            state.exit_reason = EXIT_NO_CONTRADICTION
            break
        if state.iteration >= max_iterations:
            state.exit_reason = EXIT_MAX_ITERATIONS
            break

        hypothesis = c.hypothesizer(contradictions, state.graph)
        if not isinstance(hypothesis, Hypothesis):
            abort("hypothesizer must return a Hypothesis")
        log("hypothesis", region=hypothesis.target_region, label=hypothesis.proposed_label)
        if state.last_hypothesis is not None and hypothesis == state.last_hypothesis:
            state.exit_reason = EXIT_NO_NEW_HYPOTHESIS
            break
        state.last_hypothesis = hypothesis

        region_features = c.feature_extractor(instance, contradictions)
        log("features", scope="region", regions=[x.region_id for x in contradictions])
        alg = select(region_features, hypothesis)
        if alg == state.last_algorithm:
            state.exit_reason = EXIT_NO_NEW_ALGORITHM
            break
        state.last_algorithm = alg

        new_graph = process(alg)
        state.graph = c.merger(state.graph, new_graph)
        if not isinstance(state.graph, RelationalGraph):
            abort("merger must return a RelationalGraph")
        log("merge", **_graph_summary(state.graph))
        state.iteration += 1

    log("exit", reason=state.exit_reason)
    return state
