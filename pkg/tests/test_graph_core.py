# -*- coding: utf-8 -*-
import math
from fractions import Fraction

import hypothesis.strategies as st
import networkx as nx
import pytest
from hypothesis import given, settings

from pipelines.clique_immersion.src.errors import GraphFormatError
from pipelines.clique_immersion.src.modules.graph_core import (
    AvoidSet,
    Graph,
    IdMap,
    as_fraction,
    avg_degree,
    ball,
    depths_from_parents,
    external_neighborhood,
    format_edge_list,
    parse_edge_list,
    read_edge_list,
    restrict,
    set_distance,
    write_edge_list,
)
from tests.conftest import complete, cycle, path_graph, to_networkx


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


# ==============================================================================
#      CONSTRUÇÃO E FORMATO
# ==============================================================================

def test_from_edges_builds_sorted_symmetric_adjacency():
    G = Graph.from_edges(4, [(2, 0), (0, 1), (3, 0)])
    assert G.adjacency[0] == (1, 2, 3)
    assert G.adjacency[2] == (0,)
    assert G.m == 3
    assert list(G.edges()) == [(0, 1), (0, 2), (0, 3)]


def test_direct_construction_derives_edge_set():
    G = Graph(n=3, adjacency=((1, 2), (0,), (0,)), m=2)
    assert G.has_edge(0, 1) and G.has_edge(2, 0)
    assert not G.has_edge(1, 2)
    assert G.edge_set() == Graph.from_edges(3, [(0, 1), (0, 2)]).edge_set()
    assert G == Graph.from_edges(3, [(0, 1), (0, 2)])
    assert list(G.vertices) == [0, 1, 2]


@pytest.mark.parametrize(
    "n,adjacency,m",
    [(3, ((1,), (0,)), 1), (2, ((1,), (0,)), 2), (2, ((1, 1), ()), 1)],
)
def test_direct_construction_rejects_inconsistent_adjacency(n, adjacency, m):
    with pytest.raises(GraphFormatError):
        Graph(n=n, adjacency=adjacency, m=m)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(-1, 0)]])
def test_from_edges_rejects_invalid_input(edges):
    with pytest.raises(GraphFormatError):
        Graph.from_edges(3, edges)


def test_edge_list_format_roundtrip_and_comments(tmp_path):
    G = cycle(5)
    text = format_edge_list(G, ["gen Cycle(n=5) seed=0"])
    assert text.startswith("# gen Cycle(n=5) seed=0\n5 5\n")
    path = write_edge_list(G, tmp_path / "c5.txt")
    assert read_edge_list(path) == G


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n0 1\n", "3 1\n0 1 2\n", "3 1\n0 x\n", "3 2\n0 1\n1 0\n", "2 1\n1 1\n"],
)
def test_parse_edge_list_rejects_malformed_files(text):
    with pytest.raises(GraphFormatError):
        parse_edge_list(text)


def test_fingerprint_depends_only_on_edge_set():
    a = Graph.from_edges(3, [(0, 1), (1, 2)])
    b = Graph.from_edges(3, [(2, 1), (1, 0)])
    c = Graph.from_edges(3, [(0, 1), (0, 2)])
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()


# ==============================================================================
#      GRAU MÉDIO E VIZINHANÇAS
# ==============================================================================

def test_avg_degree_examples():
    assert avg_degree(complete(4)) == 3
    assert avg_degree(cycle(5)) == 2
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert avg_degree(star) == Fraction(3, 2)


def test_avg_degree_rejects_empty_graph():
    with pytest.raises(ValueError):
        avg_degree(Graph.empty(0))


def test_as_fraction_uses_decimal_value():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(3) == 3


def test_external_neighborhood_examples():
    p3 = path_graph(3)
    assert external_neighborhood(p3, {1}) == {0, 2}
    assert external_neighborhood(p3, {1}, AvoidSet(edges={(1, 2)})) == {0}
    assert external_neighborhood(cycle(6), {0, 3}, AvoidSet(vertices={1})) == {2, 4, 5}


def test_external_neighborhood_rejects_unknown_vertex():
    with pytest.raises(ValueError):
        external_neighborhood(path_graph(3), {7})


def test_ball_examples():
    p5 = path_graph(5)
    assert ball(p5, {0}, 2)[0] == {0, 1, 2}
    assert ball(p5, {0}, 2, AvoidSet(vertices={1}))[0] == {0}
    assert ball(cycle(6), {0}, 3, AvoidSet(edges={(0, 1)}))[0] == {0, 5, 4, 3}


def test_ball_preconditions():
    p5 = path_graph(5)
    with pytest.raises(ValueError):
        ball(p5, {0}, -1)
    with pytest.raises(ValueError):
        ball(p5, {0}, 2, AvoidSet(vertices={0}))


def test_spheres_recovered_from_parent_depths():
    _, parent = ball(cycle(8), {0}, 3)
    depth = depths_from_parents(parent)
    spheres = {i: sorted(v for v, dv in depth.items() if dv == i) for i in range(4)}
    assert spheres == {0: [0], 1: [1, 7], 2: [2, 6], 3: [3, 5]}


@settings(max_examples=150, deadline=None)
@given(G=graphs(), r=st.integers(min_value=0, max_value=4), data=st.data())
def test_ball_monotone_and_neighborhood_consistent(G, r, data):
    X = data.draw(st.sets(st.integers(min_value=0, max_value=G.n - 1), min_size=1))
    inner = ball(G, X, r)[0]
    assert inner <= ball(G, X, r + 1)[0]
    assert external_neighborhood(G, X) == ball(G, X, 1)[0] - X
    banned = data.draw(st.sets(st.integers(min_value=0, max_value=G.n - 1)))
    banned -= X
    assert ball(G, X, r, AvoidSet(vertices=banned))[0] <= inner


# ==============================================================================
#      DISTÂNCIA E RESTRIÇÃO
# ==============================================================================

def test_set_distance_examples():
    assert set_distance(cycle(6), {0}, {3}) == 3
    assert set_distance(cycle(6), {2, 4}, {2, 4}) == 0
    two_edges = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert set_distance(two_edges, {0}, {2}) == math.inf
    with pytest.raises(ValueError):
        set_distance(two_edges, set(), {2})


@settings(max_examples=100, deadline=None)
@given(G=graphs(max_n=15), data=st.data())
def test_set_distance_matches_networkx_and_is_symmetric(G, data):
    vertex = st.integers(min_value=0, max_value=G.n - 1)
    a, b, c = data.draw(vertex), data.draw(vertex), data.draw(vertex)
    H = to_networkx(G)
    expected = nx.shortest_path_length(H, a, b) if nx.has_path(H, a, b) else math.inf
    assert set_distance(G, {a}, {b}) == expected
    assert set_distance(G, {b}, {a}) == expected
    assert set_distance(G, {a}, {c}) <= set_distance(G, {a}, {b}) + set_distance(G, {b}, {c})


def test_restrict_examples():
    k4 = complete(4)
    k3, ids = restrict(k4, {2})
    assert k3.n == 3 and k3.m == 3
    assert ids.to_host == (0, 1, 3)
    minus_edge, _ = restrict(k4, remove_edges={(1, 0)})
    assert minus_edge.n == 4 and minus_edge.m == 5
    c5_sub, ids = restrict(cycle(5), {0}, {(2, 3)})
    assert c5_sub.m == 2
    assert {tuple(sorted(ids.to_host[v] for v in e)) for e in c5_sub.edges()} == {(1, 2), (3, 4)}
    assert k4.m == 6


def test_restrict_ignores_unknown_ids():
    G, _ = restrict(complete(3), {10, -2})
    assert G.n == 3 and G.m == 3


@settings(max_examples=200, deadline=None)
@given(G=graphs(max_n=20), data=st.data())
def test_restrict_density_matches_networkx(G, data):
    drop = data.draw(st.sets(st.integers(min_value=0, max_value=G.n - 1), max_size=G.n - 1))
    sub, ids = restrict(G, drop)
    H = to_networkx(G)
    H.remove_nodes_from(drop)
    assert sub.n == H.number_of_nodes()
    assert avg_degree(sub) == Fraction(2 * H.number_of_edges(), H.number_of_nodes())
    assert all(ids.to_host[v] not in drop for v in range(sub.n))


def test_idmap_compose_and_lower():
    outer = IdMap.from_host_ids([3, 5, 7, 9])
    inner = IdMap.from_host_ids([1, 3])
    both = outer.compose(inner)
    assert both.to_host == (5, 9)
    assert both.lower({9, 4}) == {1}
    assert both.lift({0}) == {5}
