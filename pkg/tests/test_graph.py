"""Edge-list parsing, validation, and the graph generators."""

from __future__ import annotations

import math

import numpy as np
import pytest

from netinfluence import (
    Graph,
    GraphFormatError,
    build_counterexample,
    dump_graph,
    load_graph,
    random_graph,
    validate,
)

TWO_CYCLE = "nodes 2\nedge 0 1 1.0\nedge 1 0 1.0\n"

# 3-cycle whose node 2 receives 0.4 + 0.4 = 0.8 of incoming weight.
DEFICIENT = "nodes 3\nedge 0 1 1.0\nedge 1 2 0.4\nedge 0 2 0.4\nedge 2 0 1.0\n"


def test_parse_two_cycle():
    g = load_graph(TWO_CYCLE)
    assert g.node_count == 2
    assert g.edges == ((0, 1, 1.0), (1, 0, 1.0))


def test_parse_skips_comments_and_blank_lines():
    text = "# header comment\n\nnodes 2\n# middle\nedge 0 1 1.0\n\nedge 1 0 1.0\n"
    assert load_graph(text).edges == ((0, 1, 1.0), (1, 0, 1.0))


def test_parse_accepts_iterable_of_lines():
    g = load_graph(["nodes 2", "edge 0 1 1.0", "edge 1 0 1.0"])
    assert g.node_count == 2


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", None, "missing 'nodes"),
        ("# only comments\n", None, "missing 'nodes"),
        ("vertices 2\n", 1, "nodes <count>"),
        ("nodes two\n", 1, "bad node count"),
        ("nodes 0\n", 1, "at least one node"),
        ("nodes 2\nlink 0 1 1.0\n", 2, "edge <source> <target> <weight>"),
        ("nodes 2\nedge 0 1\n", 2, "edge <source> <target> <weight>"),
        ("nodes 2\nedge 0 x 1.0\n", 2, "bad edge tokens"),
        ("nodes 2\nedge 0 2 1.0\n", 2, "unknown node id"),
        ("nodes 2\nedge 0 0 1.0\n", 2, "self-loop"),
        ("nodes 2\nedge 0 1 0.0\n", 2, "non-positive weight"),
        ("nodes 2\nedge 0 1 -0.5\n", 2, "non-positive weight"),
        ("nodes 2\nedge 0 1 0.5\nedge 0 1 0.5\n", 3, "duplicate edge"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(GraphFormatError) as exc_info:
        load_graph(text)
    assert fragment in str(exc_info.value)
    assert exc_info.value.line == line


def test_validate_two_cycle_clean():
    report = validate(load_graph(TWO_CYCLE))
    assert report.stochastic and report.strongly_connected
    assert report.offending_nodes == ()
    assert report.ok


def test_validate_reports_stochastic_defect():
    report = validate(load_graph(DEFICIENT))
    assert not report.stochastic
    assert report.strongly_connected
    assert len(report.offending_nodes) == 1
    node, defect = report.offending_nodes[0]
    assert node == 2
    assert defect == pytest.approx(0.2, abs=1e-12)
    assert not report.ok


def test_normalize_rescales_incoming_weights():
    g = load_graph(DEFICIENT, normalize=True)
    weights = sorted(w for _, v, w in g.edges if v == 2)
    assert weights == pytest.approx([0.5, 0.5], abs=1e-15)
    assert validate(g).ok


def test_validate_flags_disconnected_components():
    # Two separate 2-cycles: stochastic but not strongly connected.
    text = "nodes 4\nedge 0 1 1.0\nedge 1 0 1.0\nedge 2 3 1.0\nedge 3 2 1.0\n"
    report = validate(load_graph(text))
    assert report.stochastic
    assert not report.strongly_connected
    assert [v for v, _ in report.offending_nodes] == [2, 3]
    assert all(math.isinf(d) for _, d in report.offending_nodes)


def test_validate_single_node_graph():
    report = validate(Graph(1, ()))
    assert report.strongly_connected
    assert not report.stochastic  # no incoming weight at the only node


@pytest.mark.parametrize(
    "node_count, edges, fragment",
    [
        (0, (), "at least one node"),
        (2, ((0, 2, 1.0),), "unknown node id"),
        (2, ((1, 1, 1.0),), "self-loop"),
        (2, ((0, 1, 0.0),), "non-positive weight"),
        (2, ((0, 1, 0.5), (0, 1, 0.5)), "duplicate edge"),
    ],
)
def test_graph_constructor_rejects_bad_input(node_count, edges, fragment):
    with pytest.raises(ValueError, match=fragment):
        Graph(node_count, edges)


def test_dump_load_round_trip():
    g = random_graph(14, 3, seed=11)
    back = load_graph(dump_graph(g))
    assert back.node_count == g.node_count
    assert [(u, v) for u, v, _ in back.edges] == [(u, v) for u, v, _ in g.edges]
    for (_, _, w_original), (_, _, w_back) in zip(g.edges, back.edges):
        assert w_back == pytest.approx(w_original, abs=1e-12)
    assert validate(back).ok


# --- ring-with-petals construction ------------------------------------------


def _in_edges(g):
    incoming = {v: {} for v in range(g.node_count)}
    for u, v, w in g.edges:
        incoming[v][u] = w
    return incoming


def test_counterexample_2_1_structure_by_hand():
    # mu = 2*(1+1)+1 = 5 central nodes, two petals each: 15 nodes, 25 edges.
    g = build_counterexample(2, 1)
    assert g.node_count == 15
    assert len(g.edges) == 25
    incoming = _in_edges(g)
    mu = 5
    for i in range(mu):
        left, right = mu + 2 * i, mu + 2 * i + 1
        # Central node: fed by its ring predecessor and its right petal, half each.
        assert incoming[i] == {(i - 1) % mu: 0.5, right: 0.5}
        # Left petal: fed only by its central node.
        assert incoming[left] == {i: 1.0}
        # Right petal: fed by its central node and the left petal, half each.
        assert incoming[right] == {i: 0.5, left: 0.5}
    assert validate(g).ok


def test_counterexample_3_2_shape():
    g = build_counterexample(3, 2)
    assert g.node_count == 30  # mu = 10 central nodes plus 20 petals
    incoming = _in_edges(g)
    mu = 10
    for i in range(mu):
        ring_feeders = {(i - 1) % mu, (i - 2) % mu}
        assert set(incoming[i]) == ring_feeders | {mu + 2 * i + 1}
        assert all(w == pytest.approx(1.0 / 3.0) for w in incoming[i].values())
    assert validate(g).ok


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("b", [1, 2, 3])
def test_counterexample_family_validates(m, b):
    g = build_counterexample(m, b)
    assert g.node_count == 3 * (m * (b + 1) + 1)
    report = validate(g)
    assert report.ok, report.offending_nodes


@pytest.mark.parametrize("m, b", [(1, 1), (0, 2), (2, 0), (3, -1)])
def test_counterexample_rejects_bad_parameters(m, b):
    with pytest.raises(ValueError):
        build_counterexample(m, b)


# --- random generator --------------------------------------------------------


def test_random_graph_degree_one_is_a_cycle():
    g = random_graph(5, 1, seed=7)
    out_counts = np.zeros(5, dtype=int)
    in_counts = np.zeros(5, dtype=int)
    for u, v, w in g.edges:
        out_counts[u] += 1
        in_counts[v] += 1
        assert w == 1.0
    assert list(out_counts) == [1] * 5
    assert list(in_counts) == [1] * 5
    assert validate(g).ok  # strong connectivity makes the cycle single


def test_random_graph_is_deterministic():
    assert random_graph(20, 3, seed=1).edges == random_graph(20, 3, seed=1).edges
    assert random_graph(20, 3, seed=1).edges != random_graph(20, 3, seed=2).edges


def test_random_graph_validates_and_respects_out_degree():
    g = random_graph(20, 3, seed=1)
    assert validate(g).ok
    out_counts = np.zeros(20, dtype=int)
    for u, _, _ in g.edges:
        out_counts[u] += 1
    assert set(out_counts) == {3}


@pytest.mark.parametrize("n, d", [(1, 1), (2, 0), (2, 2), (5, 5)])
def test_random_graph_rejects_bad_parameters(n, d):
    with pytest.raises(ValueError):
        random_graph(n, d, seed=0)
