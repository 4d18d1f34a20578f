import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import dataset
from netcoop.graph import (UNREACHABLE, EmptyGraphError, Graph, GraphParseError, bfs_distances,
                           from_edges, load_edge_list, load_gml, stats, symmetrize, write_edge_list,
                           write_gml)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_edge_list_triangle(tmp_path):
    g = load_edge_list(write(tmp_path, "t.txt", "0 1\n1 2\n2 0"))
    assert (g.node_count, g.edge_count) == (3, 3)
    assert g.degree().tolist() == [2, 2, 2]
    assert not g.directed


def test_edge_list_duplicate_collapsed(tmp_path):
    g = load_edge_list(write(tmp_path, "d.txt", "a b\nb a\n"))
    assert (g.node_count, g.edge_count) == (2, 1)
    assert g.labels == ("a", "b")


def test_edge_list_comments_self_loops_and_order(tmp_path):
    g = load_edge_list(write(tmp_path, "c.txt", "# header\n% konect style\n7 3\n3 3\n\n3 9\n"))
    assert g.labels == (7, 3, 9)
    assert g.edges == ((0, 1), (1, 2))


def test_edge_list_directed(tmp_path):
    g = load_edge_list(write(tmp_path, "x.txt", "0 1\n1 0\n1 2\n"), directed=True)
    assert g.directed and g.edge_count == 3
    assert g.adjacency == [[1], [0, 2], []]
    assert g.in_degree().tolist() == [1, 1, 1]


def test_edge_list_errors(tmp_path):
    with pytest.raises(GraphParseError, match="line 2"):
        load_edge_list(write(tmp_path, "bad.txt", "0 1\n0 1 2\n"))
    with pytest.raises(EmptyGraphError, match="empty graph"):
        load_edge_list(write(tmp_path, "empty.txt", "# nothing\n"))
    with pytest.raises(OSError):
        load_edge_list(tmp_path / "missing.txt")


def test_zachary_node_count():
    g = load_edge_list(dataset("zachary.txt"))
    assert g.node_count == 34
    assert g.edge_count == 78


GML_PATH = """Creator "test"
graph [
  node [ id 1 label "a" ]
  node [ id 2 ]
  node [ id 3 ]
  edge [ source 1 target 2 ]
  edge [ source 2 target 3 value 2.5 ]
]
"""


def test_gml_path_graph(tmp_path):
    g = load_gml(write(tmp_path, "p.gml", GML_PATH))
    assert (g.node_count, g.edge_count, g.directed) == (3, 2, False)
    assert g.adjacency == [[1], [0, 2], [1]]
    assert g.labels == (1, 2, 3)


def test_gml_directed_header(tmp_path):
    g = load_gml(write(tmp_path, "d.gml", "graph [ directed 1 node [ id 0 ] node [ id 1 ] edge [ source 0 target 1 ] ]"))
    assert g.directed
    assert g.adjacency == [[1], []]


def test_gml_missing_node(tmp_path):
    with pytest.raises(GraphParseError, match="missing node 9"):
        load_gml(write(tmp_path, "m.gml", "graph [ node [ id 0 ] edge [ source 0 target 9 ] ]"))


def test_gml_nested_construct_named(tmp_path):
    text = "graph [ node [ id 0 graphics [ x 1 ] ] ]"
    with pytest.raises(GraphParseError, match="graphics"):
        load_gml(write(tmp_path, "n.gml", text))


def test_gml_unterminated(tmp_path):
    with pytest.raises(GraphParseError, match="unterminated"):
        load_gml(write(tmp_path, "u.gml", "graph [ node [ id 0 ]"))


def test_dolphin_node_count():
    path = dataset("dolphins.gml")
    if not path.exists():
        pytest.fail(f"Dolphin network not available at {path}")
    assert load_gml(path).node_count == 62


def test_symmetrize():
    d = Graph(2, ((0, 1),), directed=True)
    u = symmetrize(d)
    assert not u.directed and u.adjacency == [[1], [0]]
    both = symmetrize(Graph(2, ((0, 1), (1, 0)), directed=True))
    assert both.edge_count == 1
    und = Graph(3, ((0, 1), (1, 2)))
    assert symmetrize(und) is und


def test_bfs_examples(path3, star4):
    assert bfs_distances(path3, 0).tolist() == [0, 1, 2]
    assert bfs_distances(Graph(2, ()), 0).tolist() == [0, UNREACHABLE]
    assert bfs_distances(star4, 0).tolist() == [0, 1, 1, 1]
    with pytest.raises(IndexError):
        bfs_distances(path3, 3)


def test_bfs_follows_out_edges():
    g = Graph(3, ((0, 1), (1, 2)), directed=True)
    assert bfs_distances(g, 2).tolist() == [UNREACHABLE, UNREACHABLE, 0]


def test_stats_examples(triangle, path4):
    s = stats(triangle)
    assert (s.node_count, s.edge_count, s.avg_degree, s.degree_std, s.mean_clustering) == (3, 3, 2.0, 0.0, 1.0)
    s = stats(path4)
    assert s.avg_degree == 1.5
    assert s.mean_clustering == 0.0
    # degrees 1,2,2,1: population std 0.5
    assert s.degree_std == pytest.approx(0.5)
    assert s.degree_variance == pytest.approx(1 / 3)


def test_zachary_degree_spread():
    s = stats(load_edge_list(dataset("zachary.txt")))
    # the published spread column for this network matches the sample variance
    assert round(s.degree_variance, 2) == 15.04
    assert s.degree_std ** 2 * 34 / 33 == pytest.approx(s.degree_variance)


def test_zachary_stats():
    s = stats(load_edge_list(dataset("zachary.txt")))
    assert s.node_count == 34
    assert round(s.avg_degree, 2) == 4.59


@st.composite
def edge_lists(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    return n, draw(st.lists(pairs, max_size=40))


@given(edge_lists(), st.booleans())
@settings(max_examples=150, deadline=None)
def test_graph_invariants(data, directed):
    n, edges = data
    g = Graph(n, tuple(edges), directed)
    assert all(u != v for u, v in g.edges)
    keys = [(u, v) if directed else tuple(sorted((u, v))) for u, v in g.edges]
    assert len(keys) == len(set(keys))
    if not directed:
        adj = [set(a) for a in g.adjacency]
        assert all(i in adj[j] for i in range(n) for j in adj[i])
        assert g.degree().sum() == 2 * g.edge_count
        for s in range(n):
            dist = bfs_distances(g, s)
            for u, v in g.edges:
                if dist[u] >= 0:
                    assert abs(dist[u] - dist[v]) <= 1
    once = symmetrize(g)
    assert symmetrize(once).same_structure(once)


@given(edge_lists())
@settings(max_examples=60, deadline=None)
def test_edge_list_round_trip(tmp_path_factory, data):
    n, edges = data
    edges = [(u, v) for u, v in edges if u != v]
    if not edges:
        return
    g = from_edges(edges)
    d = tmp_path_factory.mktemp("rt")
    write_edge_list(g, d / "g.txt")
    g2 = load_edge_list(d / "g.txt")
    assert g2.same_structure(g)
    write_gml(g, d / "g.gml")
    assert load_gml(d / "g.gml").same_structure(g)
