import random

import networkx as nx
import pytest

from egrtools.errors import MalformedEncoding, UnsupportedOrder
from egrtools.graph import (
    Graph,
    connected_components,
    disjoint_union,
    edge_connectivity,
    is_connected,
    is_regular,
    min_edge_cut,
    parse_graph6,
    read_graph6_lines,
    write_graph6,
)
from egrtools.named import REFERENCE, complete, path, petersen, two_triangles_bridge


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges)
    return h


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, [0b10, 0])  # not symmetric
    with pytest.raises(ValueError):
        Graph(1, [0b1])  # loop
    g = Graph.from_edges(3, [(2, 0), (0, 1)])
    assert g.edges == ((0, 1), (0, 2))
    assert g.degree(0) == 2 and g.size == 2


@pytest.mark.parametrize("text,order,size", [("C~", 4, 6), ("A_", 2, 1), ("@", 1, 0), ("?", 0, 0)])
def test_parse_known_strings(text, order, size):
    g = parse_graph6(text)
    assert (g.order, g.size) == (order, size)


def test_write_known_strings():
    assert write_graph6(complete(4)) == "C~"
    assert write_graph6(complete(2)) == "A_"
    assert write_graph6(Graph.empty(1)) == "@"


def test_parse_header_and_lines():
    assert parse_graph6(">>graph6<<C~") == complete(4)
    graphs = list(read_graph6_lines([">>graph6<<", "C~", "", "A_\n"]))
    assert [g.order for g in graphs] == [4, 2]


@pytest.mark.parametrize("bad", ["C", "C~~", "C\x1f", "", "~??"])
def test_parse_malformed(bad):
    with pytest.raises(MalformedEncoding):
        parse_graph6(bad)


def test_long_form_round_trip():
    rng = random.Random(3)
    n = 70
    edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.1}
    g = Graph.from_edges(n, edges)
    s = write_graph6(g)
    assert s[0] == "~"
    assert parse_graph6(s) == g
    # networkx speaks the same format
    assert nx.from_graph6_bytes(s.encode()).number_of_edges() == len(edges)


def test_write_unsupported_order():
    with pytest.raises(UnsupportedOrder):
        write_graph6(Graph.empty(258048))


def test_graph6_matches_networkx_encoding():
    for g in REFERENCE.values():
        assert write_graph6(g) == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


def test_is_regular():
    assert is_regular(petersen()) == 3
    assert is_regular(complete(5)) == 4
    k4_minus = Graph.from_edges(4, [e for e in complete(4).edges if e != (0, 1)])
    assert is_regular(k4_minus) is None


def test_components():
    assert connected_components(petersen()) == [list(range(10))]
    two = disjoint_union(complete(4), complete(4))
    assert [len(c) for c in connected_components(two)] == [4, 4]
    assert connected_components(Graph.empty(3)) == [[0], [1], [2]]
    assert not is_connected(two)


def test_edge_connectivity_examples():
    assert edge_connectivity(petersen()) == 3
    assert edge_connectivity(two_triangles_bridge()) == 1
    assert edge_connectivity(complete(4)) == 3
    assert min_edge_cut(two_triangles_bridge()) == [(2, 3)]
    # disconnected input reports zero
    assert edge_connectivity(disjoint_union(complete(3), complete(3))) == 0
    assert edge_connectivity(path(2)) == 1


def test_edge_connectivity_against_networkx():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 11)
        edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4}
        g = Graph.from_edges(n, edges)
        h = to_nx(g)
        expected = nx.edge_connectivity(h) if nx.is_connected(h) else 0
        assert edge_connectivity(g) == expected
        cut = min_edge_cut(g)
        if expected:
            assert len(cut) == expected
            assert not nx.is_connected(nx.restricted_view(h, [], cut))


def test_edge_connectivity_equals_degree_on_reference():
    for g in REFERENCE.values():
        assert edge_connectivity(g) == min(g.degrees())


def test_relabel_and_induced():
    g = petersen()
    perm = list(range(10))[::-1]
    h = g.relabel(perm)
    assert h.size == g.size and h.has_edge(9, 8) == g.has_edge(0, 1)
    sub = g.induced([0, 1, 2, 3, 4])
    assert sub.order == 5 and sub.size == 5
