import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from selacc import (
    EMPTY_GRAPH,
    AsmComponents,
    ComponentContractError,
    Contradiction,
    Hypothesis,
    RelationalGraph,
    get_scenario,
    merge_graphs,
    run_asm,
    trace_jsonl,
)
from selacc.scenarios import SCENARIO_NAMES

region_names = st.sampled_from(["r1", "r2", "r3", "r4", "r5"])
labels = st.sampled_from(["sky", "sea", "rock", "grass", "cloud"])
graphs = st.builds(
    RelationalGraph.from_mapping,
    st.dictionaries(region_names, labels, max_size=5),
    st.just(()),
)


# ------------------------------------------------------------- graphs


def test_graph_from_mapping_round_trip():
    g = RelationalGraph.from_mapping(
        {"r1": "sky", "r2": "sea"}, [("r1", "r2", "proximity")]
    )
    assert g.as_mapping() == {"r1": "sky", "r2": "sea"}
    assert g.label_of("r1") == "sky"
    assert ("r1", "r2", "proximity") in g.edges


def test_graph_rejects_conflicting_labels():
    with pytest.raises(ValueError):
        RelationalGraph(frozenset({("r1", "sky"), ("r1", "sea")}), frozenset())


def test_graph_rejects_unknown_tag_and_dangling_edge():
    with pytest.raises(ValueError):
        RelationalGraph.from_mapping({"r1": "sky", "r2": "sea"}, [("r1", "r2", "speed")])
    with pytest.raises(ValueError):
        RelationalGraph.from_mapping({"r1": "sky"}, [("r1", "r9", "proximity")])


def test_merge_label_override_and_edge_replacement():
    old = RelationalGraph.from_mapping(
        {"r1": "sky", "r2": "sand"},
        [("r1", "r2", "proximity"), ("r1", "r2", "size")],
    )
    new = RelationalGraph.from_mapping(
        {"r2": "sea", "r3": "rock"}, [("r2", "r3", "occurrence")]
    )
    merged = merge_graphs(old, new)
    assert merged.as_mapping() == {"r1": "sky", "r2": "sea", "r3": "rock"}
    # the (r1, r2) pair was not re-reported, so both its old tags survive
    assert ("r1", "r2", "proximity") in merged.edges
    assert ("r1", "r2", "size") in merged.edges
    assert ("r2", "r3", "occurrence") in merged.edges


def test_merge_edge_pair_reported_anew_is_replaced():
    old = RelationalGraph.from_mapping(
        {"r1": "sky", "r2": "sea"}, [("r1", "r2", "size"), ("r1", "r2", "shape")]
    )
    new = RelationalGraph.from_mapping(
        {"r1": "sky", "r2": "sea"}, [("r1", "r2", "proximity")]
    )
    merged = merge_graphs(old, new)
    assert merged.edges == frozenset({("r1", "r2", "proximity")})


@given(graphs)
def test_merge_identities(g):
    assert merge_graphs(g, EMPTY_GRAPH) == g
    assert merge_graphs(EMPTY_GRAPH, g) == g
    assert merge_graphs(g, g) == g


@given(graphs, graphs, graphs)
def test_merge_label_override_is_last_writer_wins(a, b, c):
    left = merge_graphs(merge_graphs(a, b), c)
    expected = dict(a.as_mapping())
    expected.update(b.as_mapping())
    expected.update(c.as_mapping())
    assert left.as_mapping() == expected


# -------------------------------------------------- component pieces


def test_contradiction_tag_validated():
    Contradiction("r1", "size")
    with pytest.raises(ValueError):
        Contradiction("r1", "speed")


def test_hypothesis_normalizes_attributes():
    # dict or pair-tuple input, int or str values: one canonical form
    h1 = Hypothesis("sky", "r1", {"b": 2, "a": 1})
    h2 = Hypothesis("sky", "r1", (("a", 1), ("b", 2)))
    assert h1 == h2
    assert h1.attributes == (("a", "1"), ("b", "2"))


def test_components_require_registry():
    noop = lambda *a, **k: None
    with pytest.raises(ValueError):
        AsmComponents(noop, noop, {}, noop, noop, noop)


# ----------------------------------------------------------- the loop


EXPECTED_EXITS = {
    "no-contradiction": ("no-contradiction", 0),
    "stuck-hypothesis": ("no-new-hypothesis", 1),
    "stuck-algorithm": ("no-new-algorithm", 0),
    "three-fixes": ("no-contradiction", 3),
    "oscillating": ("max-iterations", 4),
}


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_scenario_exits(name):
    sc = get_scenario(name)
    state = run_asm(sc.instance, sc.components, max_iterations=sc.max_iterations)
    reason, iteration = EXPECTED_EXITS[name]
    assert state.exit_reason == reason
    assert state.iteration == iteration


def test_trace_shape_and_order():
    sc = get_scenario("three-fixes")
    state = run_asm(sc.instance, sc.components, max_iterations=sc.max_iterations)
    types = [e.event_type for e in state.trace]
    assert types[0] == "features" and types[-1] == "exit"
    assert types.count("verify") == 4  # three fixing passes plus the clean one
    # iterations never decrease along the trace
    iters = [e.iteration for e in state.trace]
    assert iters == sorted(iters)


def test_three_fixes_final_graph():
    sc = get_scenario("three-fixes")
    state = run_asm(sc.instance, sc.components, max_iterations=sc.max_iterations)
    assert state.graph.as_mapping() == {
        "r1": "sky",
        "r2": "sea",
        "r3": "rock",
        "r4": "grass",
    }
    pairs = {(a, b) for a, b, _ in state.graph.edges}
    assert pairs == {("r1", "r2"), ("r2", "r3"), ("r3", "r4")}


def test_trace_jsonl_is_line_parseable():
    sc = get_scenario("oscillating")
    state = run_asm(sc.instance, sc.components, max_iterations=sc.max_iterations)
    lines = trace_jsonl(state).splitlines()
    events = [json.loads(ln) for ln in lines]
    assert all(set(e) == {"iteration", "event_type", "payload"} for e in events)
    assert events[-1]["event_type"] == "exit"
    assert events[-1]["payload"]["reason"] == "max-iterations"


def test_components_accept_plain_mapping():
    sc = get_scenario("no-contradiction")
    c = sc.components
    state = run_asm(
        sc.instance,
        {
            "feature_extractor": c.feature_extractor,
            "selector": c.selector,
            "algorithm_registry": c.algorithm_registry,
            "graph_builder": c.graph_builder,
            "verifier": c.verifier,
            "hypothesizer": c.hypothesizer,
            "merger": c.merger,
        },
    )
    assert state.exit_reason == "no-contradiction"


def test_max_iterations_validated():
    sc = get_scenario("oscillating")
    with pytest.raises(ValueError):
        run_asm(sc.instance, sc.components, max_iterations=0)


def test_lower_iteration_cap_stops_earlier():
    sc = get_scenario("oscillating")
    state = run_asm(sc.instance, sc.components, max_iterations=2)
    assert state.exit_reason == "max-iterations"
    assert state.iteration == 2


def test_unknown_algorithm_id_aborts():
    sc = get_scenario("no-contradiction")
    broken = AsmComponents(
        feature_extractor=sc.components.feature_extractor,
        selector=lambda features, ids, hypothesis=None: "no-such-algorithm",
        algorithm_registry=sc.components.algorithm_registry,
        graph_builder=sc.components.graph_builder,
        verifier=sc.components.verifier,
        hypothesizer=sc.components.hypothesizer,
    )
    with pytest.raises(ComponentContractError) as exc:
        run_asm(sc.instance, broken)
    state = exc.value.state
    assert state.trace[-1].event_type == "abort"
    assert "no-such-algorithm" in state.trace[-1].payload["error"]


def test_bad_verifier_type_aborts():
    sc = get_scenario("no-contradiction")
    broken = AsmComponents(
        feature_extractor=sc.components.feature_extractor,
        selector=sc.components.selector,
        algorithm_registry=sc.components.algorithm_registry,
        graph_builder=sc.components.graph_builder,
        verifier=lambda graph: ["not-a-contradiction"],
        hypothesizer=sc.components.hypothesizer,
    )
    with pytest.raises(ComponentContractError, match="Contradiction"):
        run_asm(sc.instance, broken)


def test_bad_graph_builder_aborts():
    sc = get_scenario("no-contradiction")
    broken = AsmComponents(
        feature_extractor=sc.components.feature_extractor,
        selector=sc.components.selector,
        algorithm_registry=sc.components.algorithm_registry,
        graph_builder=lambda seg: {"not": "a graph"},
        verifier=sc.components.verifier,
        hypothesizer=sc.components.hypothesizer,
    )
    with pytest.raises(ComponentContractError, match="RelationalGraph"):
        run_asm(sc.instance, broken)


def test_fresh_scenarios_are_independent():
    a = get_scenario("oscillating")
    run_asm(a.instance, a.components, max_iterations=a.max_iterations)
    b = get_scenario("oscillating")
    state = run_asm(b.instance, b.components, max_iterations=b.max_iterations)
    assert state.exit_reason == "max-iterations"  # no leaked counter state
    with pytest.raises(KeyError):
        get_scenario("definitely-not-a-scenario")
