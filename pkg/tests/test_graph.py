import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar4crit.graph import (
    Boundary,
    GadgetInternal,
    GraphError,
    GraphFormatError,
    LatticeX,
    LatticeY,
    build_graph,
    delete_edge,
    edge_subgraph,
    parse,
    parse_label,
    serialize,
)


@st.composite
def graphs(draw, max_n=40):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=80)) if pairs else []
    return build_graph(n, edges)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def test_graph6_known_strings():
    assert serialize(build_graph(3, [(0, 1), (0, 2), (1, 2)])) == "Bw"
    assert serialize(build_graph(1, [])) == "@"
    assert serialize(build_graph(0, [])) == "?"


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_graph6_matches_networkx(g):
    ours = serialize(g, "graph6")
    theirs = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert ours == theirs
    back = nx.from_graph6_bytes(ours.encode())
    assert sorted(map(sorted, back.edges())) == sorted(map(list, g.edges()))


def test_graph6_long_form_against_networkx():
    n = 70
    g = build_graph(n, [(i, (i * 7 + 3) % n) for i in range(n) if i != (i * 7 + 3) % n])
    text = serialize(g)
    assert text.startswith("~")
    assert text == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert parse(text) == g


@settings(max_examples=60, deadline=None)
@given(graphs(), st.sampled_from(["graph6", "dimacs", "dot"]))
def test_round_trip(g, fmt):
    assert parse(serialize(g, fmt), fmt) == g


def test_dot_keeps_labels():
    labels = [LatticeX(1, 1), LatticeY(1, 2), GadgetInternal("F1", 0), Boundary("s2")]
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)], labels)
    h = parse(serialize(g, "dot"), "dot")
    assert h == g
    assert [h.name(v) for v in range(4)] == ["x1_1", "y1_2", "F1.0", "s2"]


@pytest.mark.parametrize("label", [LatticeX(3, 4), LatticeY(2, 5), GadgetInternal("H", 12), Boundary("q3")])
def test_label_round_trip(label):
    assert parse_label(str(label)) == label


@pytest.mark.parametrize(
    "text,fmt",
    [
        ("Bx~", "graph6"),
        ("p edge 2 1\ne 1 3\n", "dimacs"),
        ("p edge 2 2\ne 1 2\n", "dimacs"),
        ("e 1 2\n", "dimacs"),
        ("digraph G { }", "dot"),
    ],
)
def test_malformed_inputs_rejected(text, fmt):
    with pytest.raises(GraphFormatError):
        parse(text, fmt)


def test_invalid_graphs_rejected():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 0)])
    with pytest.raises(GraphError):
        build_graph(2, [(0, 2)])


def test_delete_and_subgraph():
    g = build_graph(5, [(0, 1), (1, 2), (2, 0), (3, 4)])
    h = delete_edge(g, (2, 1))
    assert not h.has_edge(1, 2) and g.has_edge(1, 2)
    with pytest.raises(GraphError):
        delete_edge(h, (1, 2))
    sub, old = edge_subgraph(g, [(3, 4), (0, 1)])
    assert old == [0, 1, 3, 4]
    assert sorted(sub.edges()) == [(0, 1), (2, 3)]
