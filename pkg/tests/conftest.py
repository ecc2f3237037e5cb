# -*- coding: utf-8 -*-
"""Fixtures compartilhadas pelos testes do pipeline de imersões."""
from __future__ import annotations

from itertools import combinations

import networkx as nx
import pytest

from pipelines.clique_immersion.src.modules.generators import GenKind, GenSpec, generate
from pipelines.clique_immersion.src.modules.graph_core import Graph


def complete(n: int) -> Graph:
    return generate(GenSpec(GenKind.COMPLETE, {"n": n}))


def cycle(n: int) -> Graph:
    return generate(GenSpec(GenKind.CYCLE, {"n": n}))


def path_graph(n: int) -> Graph:
    return generate(GenSpec(GenKind.PATH, {"n": n}))


def two_k8_bridge() -> Graph:
    """Dois K8 (0..7 e 8..15) ligados pela aresta 0-8."""
    edges = list(combinations(range(8), 2)) + list(combinations(range(8, 16), 2)) + [(0, 8)]
    return Graph.from_edges(16, edges)


def disjoint_cliques(k: int, copies: int = 2) -> Graph:
    edges = []
    for c in range(copies):
        edges += [(u + c * k, v + c * k) for u, v in combinations(range(k), 2)]
    return Graph.from_edges(k * copies, edges)


def to_networkx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


@pytest.fixture
def k5() -> Graph:
    return complete(5)


@pytest.fixture
def c5() -> Graph:
    return cycle(5)


@pytest.fixture
def c8() -> Graph:
    return cycle(8)


@pytest.fixture
def two_k8() -> Graph:
    return two_k8_bridge()


@pytest.fixture
def petersen() -> Graph:
    H = nx.petersen_graph()
    return Graph.from_edges(H.number_of_nodes(), H.edges())
